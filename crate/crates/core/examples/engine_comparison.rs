// Random maps: compare SAT and exhaustive verdicts and time them.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::SeedableRng;
use topical::checks::{Checker, Condition, Engine};
use topical::gen::MapGen;

fn main() {
    let mut rng = StdRng::seed_from_u64(42);
    for n in [4, 8, 12] {
        let (mut sat_time, mut brute_time, mut holds) = (0.0, 0.0, [0usize; 5]);
        for k in 0..40 {
            let f = if k % 2 == 0 { MapGen::broad(n) } else { MapGen::nonnegative(n) }.sample(&mut rng);
            let c = Checker::new(&f);
            for (i, cond) in Condition::ALL.into_iter().enumerate() {
                let t = Instant::now();
                let a = c.check(cond, Engine::Sat).expect("decidable");
                sat_time += t.elapsed().as_secs_f64();
                let t = Instant::now();
                let b = c.check(cond, Engine::Brute).expect("within cap");
                brute_time += t.elapsed().as_secs_f64();
                assert_eq!(a.verdict, b.verdict, "{cond} on {f}");
                holds[i] += usize::from(a.holds());
            }
        }
        println!(
            "n = {n:2}: sat {:.1} ms, brute {:.1} ms; holds out of 40: {:?}",
            sat_time * 1e3,
            brute_time * 1e3,
            Condition::ALL.iter().zip(holds).map(|(c, h)| format!("{c} {h}")).collect::<Vec<_>>()
        );
    }
}
