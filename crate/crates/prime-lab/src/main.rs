fn main() {
    std::process::exit(prime_lab::cli::dispatch(std::env::args_os()));
}
