fn main() { std::process::exit(adelic::cli::main_entry()); }
