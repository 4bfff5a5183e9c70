//! Generate a reference front, cache it to disk, and report its geometry.
//!
//! Run with: cargo run -p cmoea --example reference_front [problem] [n]

use cmoea::problems::{builtin, ideal_point, load_or_generate_front, nadir_point};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "tnk".to_string());
    let n: usize = args.next().and_then(|v| v.parse().ok()).unwrap_or(500);

    let problem = builtin(&name).unwrap_or_else(|| {
        eprintln!("unknown problem `{name}`");
        std::process::exit(2);
    });
    let dir = std::path::Path::new("fronts");
    let front = load_or_generate_front(dir, problem.as_ref(), n, false).unwrap();

    println!("problem {name}: {} cached front points under {}", front.len(), dir.display());
    println!("  ideal  {:?}", ideal_point(&front));
    println!("  nadir  {:?}", nadir_point(&front));
    println!("  first  {:?}", front.first().unwrap());
    println!("  last   {:?}", front.last().unwrap());

    // The caller can plot the cached file directly; it is one point per
    // line with a `# problem=... n=... M=...` header.
}
