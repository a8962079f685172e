fn main() {
    std::process::exit(diffeo_glue::cli::main());
}
