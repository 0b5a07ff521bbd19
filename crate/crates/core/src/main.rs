use std::io::{self, BufWriter, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let code = ballotkit::cli::run(std::env::args_os(), &mut out, &mut err);
    if out.flush().is_err() && code == 0 {
        std::process::exit(2);
    }
    std::process::exit(code);
}
