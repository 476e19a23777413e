use std::io;

use cve_core::cli::{main_with, Io};

fn main() {
    let code = main_with(
        std::env::args_os(),
        Io {
            stdin: &mut io::stdin().lock(),
            stdout: &mut io::stdout().lock(),
            stderr: &mut io::stderr().lock(),
        },
    );
    std::process::exit(code);
}
