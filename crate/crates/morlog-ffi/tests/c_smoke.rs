//! Compiles and runs the C demo against the generated header and the
//! static library, when a C compiler is available.

use std::path::PathBuf;
use std::process::Command;

fn have_cc() -> bool {
    Command::new("cc")
        .arg("--version")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn static_lib() -> Option<PathBuf> {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = match std::env::var_os("CARGO_TARGET_DIR") {
        Some(d) => PathBuf::from(d),
        None => manifest.join("../../target"),
    };
    ["debug", "release"]
        .iter()
        .map(|p| target.join(p).join("libmorlog_ffi.a"))
        .filter(|p| p.exists())
        .max_by_key(|p| p.metadata().and_then(|m| m.modified()).ok())
}

#[test]
fn demo_builds_and_runs() {
    if !have_cc() {
        eprintln!("skipping: no C compiler on PATH");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = match static_lib() {
        Some(l) => l,
        None => {
            // cargo test builds the staticlib before running this test;
            // only a custom target layout can make it unfindable
            eprintln!("skipping: libmorlog_ffi.a not found");
            return;
        }
    };
    let out_dir = lib.parent().unwrap().join("c-smoke");
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("demo");

    let compile = Command::new("cc")
        .arg(manifest.join("examples/demo.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("cc should run");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("demo should run");
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(
        run.status.success(),
        "demo exited nonzero:\nstdout:\n{stdout}\nstderr:\n{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(stdout.contains("[pass] gaussian-alternating-sum"), "stdout:\n{stdout}");
    assert!(stdout.contains("rejected:"), "stdout:\n{stdout}");
    assert!(stdout.contains("criterion 1: pass"), "stdout:\n{stdout}");
}
