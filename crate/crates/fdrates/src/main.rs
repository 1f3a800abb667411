fn main() {
    std::process::exit(fdrates::run(std::env::args_os()));
}
