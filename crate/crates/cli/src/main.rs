use std::io::{self, BufWriter, Write};
use std::process;

use clap::Parser;
use expectile_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = run(&cli, &mut out, &mut io::stderr());
    if out.flush().is_err() && code == 0 {
        process::exit(1);
    }
    process::exit(code);
}
