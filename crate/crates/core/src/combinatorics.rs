use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

static FACTORIALS: OnceLock<Mutex<Vec<BigUint>>> = OnceLock::new();

/// `k!`, from a process-wide cache.
pub fn factorial(k: usize) -> BigUint {
    let cache = FACTORIALS.get_or_init(|| Mutex::new(vec![BigUint::one()]));
    let mut table = cache.lock().expect("factorial cache poisoned");
    while table.len() <= k {
        let next = table.last().unwrap() * BigUint::from(table.len());
        table.push(next);
    }
    table[k].clone()
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `(Σ parts)! / ∏ parts!`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let total: usize = parts.iter().sum();
    parts.iter().fold(factorial(total), |acc, &p| acc / factorial(p))
}

/// EGF product on integer count sequences:
/// `(a ⊙ b)_k = Σ_j C(k, j) a_j b_{k-j}`, truncated to `len` terms.
pub fn binomial_convolution(a: &[BigUint], b: &[BigUint], len: usize) -> Vec<BigUint> {
    (0..len)
        .map(|k| {
            let mut acc = BigUint::default();
            for j in 0..=k {
                let (Some(x), Some(y)) = (a.get(j), b.get(k - j)) else { continue };
                if x.bits() == 0 || y.bits() == 0 {
                    continue;
                }
                acc += binomial(k, j) * x * y;
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(10), BigUint::from(3_628_800u32));
        assert_eq!(binomial(7, 3), BigUint::from(35u32));
        assert_eq!(binomial(3, 7), BigUint::default());
        assert_eq!(multinomial(&[2, 1, 1]), BigUint::from(12u32));
        assert_eq!(multinomial(&[]), BigUint::from(1u32));
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }

    #[test]
    fn convolution_matches_multinomial_sum() {
        // (1,1,1,…) ⊙ (1,1,1,…) = 2^k
        let ones = vec![BigUint::one(); 6];
        let c = binomial_convolution(&ones, &ones, 6);
        for (k, v) in c.iter().enumerate() {
            assert_eq!(*v, BigUint::from(1u32 << k));
        }
    }
}
