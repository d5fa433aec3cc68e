fn main() {
    let _ = env_logger::try_init();
    let code = entrywise::cli::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
