fn main() {
    std::process::exit(fluxlogic::cli::run_env(std::env::args_os()));
}
