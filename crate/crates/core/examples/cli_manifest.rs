//! Drive the command line in-process and replay the run from its manifest.

use widthlab::cli::main_with_args;

pub fn main() {
    let dir = std::env::temp_dir().join(format!("widthlab-example-{}", std::process::id()));
    let out = dir.to_str().expect("utf-8 temp path");
    let code = main_with_args(["widthlab", "separation", "--alpha", "0.5", "--beta", "0.125", "--t", "1,10,100", "--out", out]);
    assert_eq!(code, 0);
    let first = std::fs::read_to_string(dir.join("bounds.csv")).expect("written");
    print!("{first}");
    let manifest = dir.join("manifest.json");
    assert_eq!(main_with_args(["widthlab", "--config", manifest.to_str().expect("utf-8")]), 0);
    let again = std::fs::read_to_string(dir.join("bounds.csv")).expect("written");
    println!("replay identical: {}", first == again);
    let _ = std::fs::remove_dir_all(&dir);
}
