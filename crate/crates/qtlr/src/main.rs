fn main() {
    // Optional worker-count cap; rayon otherwise uses all cores.
    if let Ok(n) = std::env::var("QTLR_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    std::process::exit(qtlr::cli::run(std::env::args_os()));
}
