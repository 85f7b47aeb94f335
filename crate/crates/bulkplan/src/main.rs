fn main() {
    std::process::exit(bulkplan::cli::run());
}
