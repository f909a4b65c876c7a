fn main() {
    std::process::exit(ubst::cli::main_with(std::env::args_os()));
}
