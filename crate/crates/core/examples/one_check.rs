fn main() {
    let name = std::env::args().nth(1).expect("check name");
    let seed = 2024u64;
    let t = std::time::Instant::now();
    let r = match name.as_str() {
        "bracket_jacobian" => weylift::suite::check_bracket_jacobian(seed),
        "lift_round_trip" => weylift::suite::check_lift_round_trip(seed),
        "star_products" => weylift::suite::check_star_products(seed),
        "weyl_oracle" => weylift::suite::check_weyl_oracle(seed),
        "char_p_center" => weylift::suite::check_char_p_center(),
        "center_bracket_laws" => weylift::suite::check_center_bracket_laws(seed),
        "direct_homomorphism" => weylift::suite::check_direct_homomorphism(seed),
        "approximation" => weylift::suite::check_approximation(seed),
        "gauge_normalization" => weylift::suite::check_gauge_normalization(seed),
        "lemma3_degree" => weylift::suite::check_lemma3_degree(seed),
        "nagata" => weylift::suite::check_nagata(),
        "ring_laws" => weylift::suite::check_ring_laws(seed),
        "metric_laws" => weylift::suite::check_metric_laws(seed),
        "weyl_associativity" => weylift::suite::check_weyl_associativity(seed),
        "commutator_bracket" => weylift::suite::check_commutator_bracket(seed),
        "truncation_soundness" => weylift::suite::check_truncation_soundness(seed),
        _ => panic!("unknown check"),
    };
    match r {
        Ok(r) => println!(
            "{:>9.2?} {} {}: {} cases {:?}",
            t.elapsed(),
            if r.passed() { "PASS" } else { "FAIL" },
            name,
            r.cases,
            r.failures
        ),
        Err(e) => println!("{:>9.2?} ERR {}: {}", t.elapsed(), name, e),
    }
}
