fn main() {
    std::process::exit(wd_exponents::cli::run_command(std::env::args_os()));
}
