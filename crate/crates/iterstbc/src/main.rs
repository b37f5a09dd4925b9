fn main() {
    std::process::exit(iterstbc::run(std::env::args_os()));
}
