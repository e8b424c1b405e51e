use std::io::Write;

fn main() {
    let res = ssmthom_cli::run_command(std::env::args_os().skip(1));
    std::io::stdout().write_all(res.stdout.as_bytes()).ok();
    std::io::stderr().write_all(res.stderr.as_bytes()).ok();
    std::process::exit(res.code);
}
