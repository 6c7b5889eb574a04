fn main() {
    std::process::exit(boltz_spectral::cli::run(std::env::args_os()));
}
