use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let out = PathBuf::from(env::var("OUT_DIR").unwrap()).join("morlog.h");

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml"))
        .expect("cbindgen.toml should parse");
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen should generate the header");
    bindings.write_to_file(&out);

    // keep the committed header in sync; ignore failures on read-only checkouts
    let _ = std::fs::create_dir_all(crate_dir.join("include"));
    let _ = std::fs::copy(&out, crate_dir.join("include/morlog.h"));
}
