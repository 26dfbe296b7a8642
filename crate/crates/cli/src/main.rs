use std::io::Write;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SPHERVOL_LOG", "off")).init();
    let out = sphervol_cli::run(std::env::args_os(), &mut std::io::stdin());
    let mut stdout = std::io::stdout();
    // a closed pipe leaves nothing useful to report
    let _ = stdout.write_all(out.stdout.as_bytes());
    std::process::exit(out.code);
}
