use std::io::Write;

fn main() {
    let result = ptflab::cli::dispatch(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(result.stdout().as_bytes());
    let _ = stdout.flush();
    if !result.diagnostics.is_empty() {
        eprint!("{}", result.diagnostics);
        if !result.diagnostics.ends_with('\n') {
            eprintln!();
        }
    }
    std::process::exit(result.exit_code);
}
