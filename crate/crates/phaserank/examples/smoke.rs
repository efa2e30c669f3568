use phaserank::verify;
use std::time::Instant;

fn main() {
    let arg: Option<usize> = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let seed = 42;
    let suites: Vec<(&str, Box<dyn Fn() -> verify::SuiteOutcome>)> = vec![
        ("example1", Box::new(|| verify::example1_suite())),
        ("thm32", Box::new(|| verify::thm32_suite())),
        ("figure1", Box::new(|| verify::figure1_suite(720))),
        ("thm31", Box::new(move || verify::thm31_suite(seed, arg.unwrap_or(10), 10))),
        ("mean", Box::new(move || verify::geometric_mean_suite(seed, arg.unwrap_or(20)))),
        ("polar", Box::new(move || verify::symmetric_polar_suite(seed, arg.unwrap_or(20)))),
        ("thm41_maj", Box::new(move || verify::thm41_majorization_suite(seed, 5, 50))),
        ("thm41_bf", Box::new(move || verify::thm41_bruteforce_suite(seed, 500))),
        ("thm42", Box::new(move || verify::thm42_suite(seed, arg.unwrap_or(10)))),
        ("lemma_a1", Box::new(move || verify::lemma_a1_suite(seed, arg.unwrap_or(20)))),
        ("eq_a1", Box::new(move || verify::eq_a1_suite(seed, 3, 50))),
        ("schmidt", Box::new(move || verify::schmidt_mirsky_suite(seed, arg.unwrap_or(20)))),
    ];
    for (name, f) in suites {
        let t0 = Instant::now();
        let out = f();
        println!(
            "{:12} passed={} checks={} time={:?} stats={:?} failures={:?}",
            name, out.passed, out.checks, t0.elapsed(), out.stats, out.failures
        );
    }
}
