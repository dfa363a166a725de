//! Brute-force reference implementations written straight from the
//! definitions: plain loops, `powf` and `log2`, no library code.

#![allow(dead_code)]

pub fn shannon(p: &[f64], tau: f64) -> f64 {
    let mut s = 0.0;
    for &x in p {
        if x > 0.0 {
            s += x * x.log2();
        }
    }
    tau * s
}

pub fn power_sum(p: &[f64], alpha: f64) -> f64 {
    let mut s = 0.0;
    for &x in p {
        if x > 0.0 {
            s += x.powf(alpha);
        }
    }
    s
}

pub fn nath(p: &[f64], tau: f64, lambda: f64, alpha: f64) -> f64 {
    if lambda == 0.0 {
        shannon(p, tau)
    } else {
        power_sum(p, alpha).log2() / lambda
    }
}

pub fn renyi(p: &[f64], alpha: f64) -> f64 {
    if alpha == 1.0 {
        shannon(p, -1.0)
    } else {
        power_sum(p, alpha).log2() / (1.0 - alpha)
    }
}

pub fn tsallis(p: &[f64], alpha: f64, gamma: f64, tau: f64) -> f64 {
    if gamma == 0.0 {
        shannon(p, tau)
    } else {
        (power_sum(p, alpha) - 1.0) / gamma
    }
}

pub fn gaussian(p: &[f64], q: f64, gamma: f64) -> f64 {
    let mut prod = 1.0;
    for &x in p {
        if x > 0.0 {
            prod *= x.powf((q - 1.0) * x);
        }
    }
    (prod - 1.0) / gamma
}

pub fn sharma_mittal(p: &[f64], q: f64, alpha: f64, gamma: f64) -> f64 {
    match (q == 1.0, alpha == 1.0) {
        (true, true) => shannon(p, -1.0),
        (false, true) => gaussian(p, q, gamma),
        (true, false) => renyi(p, alpha),
        (false, false) => (power_sum(p, alpha).powf((q - 1.0) / (alpha - 1.0)) - 1.0) / gamma,
    }
}

/// `(2^{λx} − 1)/γ`, or `a·x` for the linear generator (`gamma == 0`).
pub fn h(lambda: f64, gamma: f64, x: f64) -> f64 {
    if gamma == 0.0 {
        lambda * x
    } else {
        (2f64.powf(lambda * x) - 1.0) / gamma
    }
}

pub fn gamma_add(u: f64, v: f64, gamma: f64) -> f64 {
    u + v + gamma * u * v
}

/// `(1/λ) log2 Σ w 2^{λx}`, the weighted arithmetic mean when `λ = 0`.
pub fn exp_mean(lambda: f64, w: &[f64], x: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..w.len() {
        if w[k] > 0.0 {
            s += if lambda == 0.0 {
                w[k] * x[k]
            } else {
                w[k] * 2f64.powf(lambda * x[k])
            };
        }
    }
    if lambda == 0.0 {
        s
    } else {
        s.log2() / lambda
    }
}

pub fn escort(p: &[f64], alpha: f64) -> Vec<f64> {
    let s = power_sum(p, alpha);
    p.iter()
        .map(|&x| if x > 0.0 { x.powf(alpha) / s } else { 0.0 })
        .collect()
}

pub fn biparametric(p: &[f64], tau: f64, lambda: f64, alpha: f64) -> f64 {
    if lambda == 0.0 {
        let e = escort(p, alpha);
        let mut s = 0.0;
        for k in 0..p.len() {
            if p[k] > 0.0 {
                s += e[k] * p[k].log2();
            }
        }
        tau * s
    } else {
        -(power_sum(p, alpha - tau * lambda) / power_sum(p, alpha)).log2() / lambda
    }
}

/// Marginal and row-normalized conditionals of a joint given as rows.
pub fn split(j: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let mut marginal = Vec::new();
    let mut conds = Vec::new();
    for row in j {
        let mut m = 0.0;
        for &c in row {
            m += c;
        }
        marginal.push(m);
        conds.push(row.iter().map(|&c| c / m).collect());
    }
    (marginal, conds)
}

pub fn flat(j: &[Vec<f64>]) -> Vec<f64> {
    let mut v = Vec::new();
    for row in j {
        v.extend_from_slice(row);
    }
    v
}

pub fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Small deterministic generator for test inputs, independent of the library's sampler.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -self.next_f64().ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.iter().map(|x| x / s).collect()
    }
}
