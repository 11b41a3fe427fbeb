//! Instance generators for `gen-preset`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, CliResult};
use crate::instance::{InstanceFile, KroneckerFile, LinearSystemFile};

pub const KINDS: &[&str] = &["sqrt-primes", "one-sqrt2", "golden", "pi-e", "random-rational", "random-system"];

#[derive(Debug, Clone)]
pub struct PresetOptions {
    pub kind: String,
    pub n: usize,
    /// Only used by `random-system`.
    pub m: usize,
    pub eps: String,
    pub tau: String,
    pub delta: Option<String>,
    pub seed: u64,
    pub precision_bits: u32,
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2u64;
    while out.len() < count {
        if (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// `alpha_j = k/64` drawn from the seeded generator.
fn alphas(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n).map(|_| format!("{}/64", rng.gen_range(0..64))).collect()
}

fn lambdas(kind: &str, n: usize, rng: &mut ChaCha8Rng) -> CliResult<Vec<String>> {
    let fixed = |list: &[&str]| -> CliResult<Vec<String>> {
        if n > list.len() {
            return Err(invalid(format!("{kind} supports n <= {}", list.len())));
        }
        Ok(list[..n].iter().map(|s| s.to_string()).collect())
    };
    match kind {
        "sqrt-primes" => Ok(primes(n).iter().map(|p| format!("sqrt({p})")).collect()),
        "one-sqrt2" => fixed(&["1", "sqrt(2)"]),
        "golden" => fixed(&["1", "phi"]),
        "pi-e" => fixed(&["1", "pi", "e", "log(2)"]),
        "random-rational" => Ok((0..n)
            .map(|_| {
                let p: i64 = rng.gen_range(1..100);
                let sign = if rng.gen_bool(0.5) { "-" } else { "" };
                format!("{sign}{p}/{}", rng.gen_range(1..20))
            })
            .collect()),
        other => Err(invalid(format!("unknown preset {other:?}; known: {}", KINDS.join(", ")))),
    }
}

pub fn generate(opts: &PresetOptions) -> CliResult<InstanceFile> {
    if opts.n == 0 {
        return Err(invalid("n must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let file = if opts.kind == "random-system" {
        if opts.m == 0 {
            return Err(invalid("m must be positive"));
        }
        let (m, n) = (opts.m, opts.n);
        let theta = (0..m * n)
            .map(|_| format!("{}/{}", rng.gen_range(-40..=40), rng.gen_range(1..16)))
            .collect();
        InstanceFile::LinearSystem(LinearSystemFile {
            m,
            n,
            theta,
            alpha: alphas(&mut rng, n),
            epsilon: vec![opts.eps.clone(); n],
            x: Some((0..m).map(|_| rng.gen_range(2..=8).to_string()).collect()),
            tau: None,
            t: None,
            precision_bits: opts.precision_bits,
        })
    } else {
        let lambda = lambdas(&opts.kind, opts.n, &mut rng)?;
        InstanceFile::Kronecker(KroneckerFile {
            lambda,
            alpha: alphas(&mut rng, opts.n),
            epsilon: vec![opts.eps.clone(); opts.n],
            tau: opts.tau.clone(),
            delta: opts.delta.clone(),
            precision_bits: opts.precision_bits,
        })
    };
    file.validate()?;
    Ok(file)
}
