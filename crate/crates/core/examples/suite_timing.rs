fn main() {
    let seed = 2024u64;
    let checks: Vec<(&str, Box<dyn Fn() -> weylift::Result<weylift::suite::PropertyReport>>)> = vec![
        ("bracket_jacobian", Box::new(move || weylift::suite::check_bracket_jacobian(seed))),
        ("lift_round_trip", Box::new(move || weylift::suite::check_lift_round_trip(seed))),
        ("star_products", Box::new(move || weylift::suite::check_star_products(seed))),
        ("weyl_oracle", Box::new(move || weylift::suite::check_weyl_oracle(seed))),
        ("char_p_center", Box::new(move || weylift::suite::check_char_p_center())),
        ("center_bracket_laws", Box::new(move || weylift::suite::check_center_bracket_laws(seed))),
        ("direct_homomorphism", Box::new(move || weylift::suite::check_direct_homomorphism(seed))),
        ("approximation", Box::new(move || weylift::suite::check_approximation(seed))),
        ("gauge_normalization", Box::new(move || weylift::suite::check_gauge_normalization(seed))),
        ("lemma3_degree", Box::new(move || weylift::suite::check_lemma3_degree(seed))),
        ("nagata", Box::new(move || weylift::suite::check_nagata())),
        ("ring_laws", Box::new(move || weylift::suite::check_ring_laws(seed))),
        ("metric_laws", Box::new(move || weylift::suite::check_metric_laws(seed))),
        ("weyl_associativity", Box::new(move || weylift::suite::check_weyl_associativity(seed))),
        ("commutator_bracket", Box::new(move || weylift::suite::check_commutator_bracket(seed))),
        ("truncation_soundness", Box::new(move || weylift::suite::check_truncation_soundness(seed))),
    ];
    for (name, f) in checks {
        let t = std::time::Instant::now();
        match f() {
            Ok(r) => println!(
                "{:>8.2?} {} {}: {} cases {:?}",
                t.elapsed(),
                if r.passed() { "PASS" } else { "FAIL" },
                name,
                r.cases,
                r.failures
            ),
            Err(e) => println!("{:>8.2?} ERR {}: {}", t.elapsed(), name, e),
        }
    }
}
