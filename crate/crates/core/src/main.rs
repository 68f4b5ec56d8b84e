fn main() {
    std::process::exit(humanoid_motion::cli::main_with(std::env::args_os()));
}
