fn main() {
    std::process::exit(qextremal_cli::run(std::env::args_os().skip(1)));
}
