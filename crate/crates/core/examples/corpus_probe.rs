use weylift::corpus::{random_symplectic_word, CorpusSpec};
use weylift::poly::Degree;

fn main() {
    for n in [1usize, 2] {
        let spec = CorpusSpec::symplectic_words(2024 ^ n as u64, n);
        let mut rng = spec.rng();
        let mut max_terms = 0usize;
        let mut max_deg = 0u32;
        let t = std::time::Instant::now();
        for i in 0..50 {
            let w = random_symplectic_word(&mut rng, &spec).unwrap();
            let e = w.evaluate().unwrap();
            let terms: usize = e.images().iter().map(|f| f.n_terms()).sum();
            let deg = e.images().iter().map(|f| match f.degree() { Degree::Finite(d) => d, _ => 0 }).max().unwrap();
            max_terms = max_terms.max(terms);
            max_deg = max_deg.max(deg);
            if terms > 2000 { println!("  word {} n={}: {} terms deg {}", i, n, terms, deg); }
        }
        println!("n={}: eval max_terms={} max_deg={} in {:.2?}", n, max_terms, max_deg, t.elapsed());
    }
}
