fn main() {
    std::process::exit(so4lab_cli::run(std::env::args_os()));
}
