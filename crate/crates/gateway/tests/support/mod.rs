#![allow(dead_code)]

pub mod fixtures;

use std::io::Cursor;
use std::path::Path;

/// Output of one in-process CLI run.
pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn cli(root: &Path, args: &[&str]) -> Run {
    cli_with_input(root, args, "")
}

pub fn cli_with_input(root: &Path, args: &[&str], input: &str) -> Run {
    let mut argv = vec!["ctxforge".to_owned(), "--root".to_owned(), root.display().to_string()];
    argv.extend(args.iter().map(|a| (*a).to_owned()));
    let mut stdin = Cursor::new(input.as_bytes().to_vec());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ctxforge::run(&argv, &mut stdin, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).expect("utf-8 stdout"),
        stderr: String::from_utf8(err).expect("utf-8 stderr"),
    }
}
