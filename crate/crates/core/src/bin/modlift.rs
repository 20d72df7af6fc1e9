fn main() {
    env_logger::init();
    std::process::exit(modlift::cli::run(std::env::args_os()));
}
