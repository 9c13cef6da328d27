//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler or static library is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "pkidx.h"

int main(void) {
    const char *text = "mississippi";
    PkidxIndex *idx = NULL;
    if (pkidx_build((const uint8_t *)text, strlen(text), 0, &idx) != PKIDX_STATUS_OK) return 1;
    size_t count = 0;
    if (pkidx_count(idx, (const uint8_t *)"ssi", 3, &count) != PKIDX_STATUS_OK || count != 2) return 2;
    size_t *pos = NULL, n = 0;
    if (pkidx_locate(idx, (const uint8_t *)"issi", 4, &pos, &n) != PKIDX_STATUS_OK || n != 2) return 3;
    size_t sum = pos[0] + pos[1];
    pkidx_positions_free(pos, n);
    if (sum != 5) return 4;
    bool found = false;
    size_t at = 0;
    if (pkidx_predecessor(idx, (const uint8_t *)"m", 1, &found, &at) != PKIDX_STATUS_OK || !found || at != 1) return 5;
    pkidx_free(idx);
    if (pkidx_build(NULL, 0, 0, &idx) != PKIDX_STATUS_EMPTY_TEXT || strlen(pkidx_last_error()) == 0) return 6;
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap().to_path_buf();
    let lib = profile_dir.join("libpkidx_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or {}", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("pkidx-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.join("main");
    let out = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stdout));
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
    std::fs::remove_dir_all(dir).unwrap();
}
