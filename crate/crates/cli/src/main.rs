fn main() { std::process::exit(vgbs_cli::run(std::env::args().skip(1))) }
