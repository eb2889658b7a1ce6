fn main() {
    std::process::exit(corename::run(std::env::args_os()));
}
