fn main() {
    std::process::exit(kappa_mu_secrecy::cli::run(std::env::args_os()));
}
