fn main() {
    std::process::exit(ballbody::cli::main_entry());
}
