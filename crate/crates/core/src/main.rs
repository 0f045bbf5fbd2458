fn main() -> std::process::ExitCode {
    qpos::cli::main_entry()
}
