//! Seeded random number generation with a fixed, fully specified algorithm.
//!
//! Workload traces must be reproducible across implementations given the same
//! seed, so this module pins every sampling step rather than delegating to a
//! library whose internals may change:
//!
//! - Base generator: SplitMix64 used as a counter-based generator. The k-th
//!   output (k = 1, 2, ...) is `mix64(seed + k * 0x9E3779B97F4A7C15)` with
//!   the standard finalizer
//!   `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`.
//! - Uniforms: `u64 >> 11` scaled by 2^-53 gives [0, 1); adding 1 before
//!   scaling gives (0, 1] where a positive value is required under `ln`.
//! - Standard normal: Box-Muller, one value per pair of uniforms
//!   (`sqrt(-2 ln u1) * cos(2*pi*u2)`, the sine twin is discarded).
//! - Gamma(shape k >= 1): Marsaglia-Tsang rejection with `d = k - 1/3`,
//!   `c = 1/(3*sqrt(d))`, accepting `d*v` when
//!   `ln(u) < x^2/2 + d - d*v + d*ln(v)`.
//! - Gamma(shape k < 1): sample Gamma(k + 1) and multiply by `u^(1/k)`.
//!
//! Substreams: stream `i` (e.g. one per workload model) is seeded with the
//! `(i+1)`-th output of a SplitMix64 stream seeded with the master seed, so
//! each substream depends only on `(seed, i)`.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

/// SplitMix64 counter generator.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { state: seed }
    }

    /// Generator for substream `index` of `seed` (independent per index).
    pub fn substream(seed: u64, index: u64) -> Self {
        let sub_seed = CounterRng::new(seed).nth_output(index);
        CounterRng::new(sub_seed)
    }

    /// The `(n+1)`-th raw output of a fresh stream with this state.
    fn nth_output(&self, n: u64) -> u64 {
        mix64(self.state.wrapping_add(GOLDEN.wrapping_mul(n.wrapping_add(1))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in (0, 1], safe under `ln`.
    pub fn uniform_pos(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (cosine branch only).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform_pos();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Gamma variate with the given shape and scale.
    pub fn gamma(&mut self, shape: f64, scale: f64) -> f64 {
        assert!(shape > 0.0 && scale > 0.0, "gamma needs positive parameters");
        if shape < 1.0 {
            // Boost: Gamma(k) = Gamma(k+1) * U^(1/k).
            let g = self.gamma_shape_ge1(shape + 1.0);
            let u = self.uniform_pos();
            g * u.powf(1.0 / shape) * scale
        } else {
            self.gamma_shape_ge1(shape) * scale
        }
    }

    fn gamma_shape_ge1(&mut self, shape: f64) -> f64 {
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (3.0 * d.sqrt());
        loop {
            let x = self.normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.uniform_pos();
            if u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
                return d * v;
            }
        }
    }
}
