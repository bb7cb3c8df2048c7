use std::io::Write;

fn main() {
    let (code, out) = oclam::cli::run(std::env::args_os());
    let res = if !matches!(code, 1 | 4) || std::env::args().any(|a| a == "--json") {
        std::io::stdout().write_all(out.as_bytes())
    } else {
        std::io::stderr().write_all(out.as_bytes())
    };
    if res.is_err() {
        std::process::exit(4);
    }
    std::process::exit(code);
}
