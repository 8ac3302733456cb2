//! Compiles and runs a small C program against the generated header and the
//! shared library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "websplit.h"

int main(void) {
    const char *refs[] = {"a b c d f"};
    double score = 0.0;
    if (ws_bleu4("a b c d e", refs, 1, &score) != WS_STATUS_OK) return 1;
    if (score < 66.86 || score > 66.88) return 2;

    char *out = NULL;
    if (ws_segment("It rained. We stayed in.", &out) != WS_STATUS_OK) return 3;
    if (strcmp(out, "[\"It rained.\",\"We stayed in.\"]") != 0) return 4;
    ws_string_free(out);

    WsSplitModel *model = NULL;
    if (ws_split_model_from_json("{", &model) != WS_STATUS_INVALID_INPUT) return 5;
    if (ws_last_error() == NULL) return 6;

    out = NULL;
    if (ws_split_and_rephrase(NULL, NULL, "x", "[\"A_b | name | C\"]", &out) != WS_STATUS_OK) return 7;
    printf("%s\n", out);
    ws_string_free(out);
    return 0;
}
"#;

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
}

fn library_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let libdir = library_dir();
    assert!(
        libdir.join("libwebsplit_ffi.so").exists() || libdir.join("libwebsplit_ffi.dylib").exists(),
        "shared library not found in {}",
        libdir.display()
    );
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg("-L")
        .arg(&libdir)
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .arg("-lwebsplit_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "C program failed: {out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout), "A b name C .\n");
}
