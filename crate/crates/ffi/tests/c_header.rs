//! Builds and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler or static library is found.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "confluence_lab.h"

int main(void) {
    ClTerm *t = NULL;
    if (cl_term_parse("(\\x. x x) ((\\y. y) (\\y. y))", NULL, &t) != CL_STATUS_OK) return 10;
    ClTerm *d = NULL;
    if (cl_complete_dev(t, &d) != CL_STATUS_OK) return 11;
    char *s = NULL;
    if (cl_term_pretty(d, NULL, &s) != CL_STATUS_OK) return 12;
    int ok = strcmp(s, "(\\x. x) (\\x. x)") == 0;
    printf("%s\n", s);
    cl_string_free(s);
    cl_term_free(d);
    cl_term_free(t);
    if (cl_term_parse("(\\x. x", NULL, &t) != CL_STATUS_PARSE) return 13;
    char *err = cl_last_error();
    if (err == NULL) return 14;
    cl_string_free(err);
    return ok ? 0 : 15;
}
"#;

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libconfluence_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_lib() else {
        eprintln!("skipping: static library not built");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("confluence-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C program failed to compile or link");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(\\x. x) (\\x. x)");
    let _ = std::fs::remove_dir_all(&dir);
}
