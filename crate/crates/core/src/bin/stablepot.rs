fn main() -> std::process::ExitCode {
    stable_potentials::cli::run(std::env::args_os())
}
