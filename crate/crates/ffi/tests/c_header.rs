//! Compiles and runs `examples/cf.c` against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/<test binary> -> target/<profile>/
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.parent()?.join("libfarey_laurent_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_builds_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let include = root.join("include");
    let src = root.join("examples/cf.c");

    let syntax = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(syntax.status.success(), "{}", String::from_utf8_lossy(&syntax.stderr));

    let Some(lib) = static_lib() else {
        eprintln!("static library not found; header checked only");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("cf");
    let build = Command::new(&cc)
        .args(["-std=c99", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(build.status.success(), "{}", String::from_utf8_lossy(&build.stderr));

    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let out = String::from_utf8(run.stdout).unwrap();
    assert!(out.contains("A_1 = t  P/Q = (1)/(t)"), "{out}");
    assert!(out.contains("A_2 = t  P/Q = (t)/(t^2+1)"), "{out}");
    assert!(out.contains("terminated: yes"), "{out}");
    assert!(out.contains("q = 6: status 4"), "{out}");
}
