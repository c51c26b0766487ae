//! Dense polynomials over F_p, constant coefficient first. Only what field
//! construction needs: reduction, products modulo a monic polynomial, gcd and
//! Rabin's irreducibility test.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo `f` (f need not be monic but must be nonzero).
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let mut f = f.to_vec();
    trim(&mut f);
    let df = f.len() - 1;
    let lead_inv = inv_mod_p(f[df], p);
    while r.len() > df {
        let top = r.len() - 1;
        let coef = r[top] * lead_inv % p;
        let shift = top - df;
        for (i, &fi) in f.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - coef * fi % p) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn pow_poly_mod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let len = a.len().max(b.len());
    let mut out: Poly = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// x^(p^i) mod f, by repeated p-th powering.
fn x_pow_p_iter(f: &[u64], p: u64, i: u32) -> Poly {
    let mut acc = rem(&[0, 1], f, p);
    for _ in 0..i {
        acc = pow_poly_mod(&acc, p, f, p);
    }
    acc
}

/// Rabin's test: monic `f` of degree n is irreducible iff x^(p^n) = x mod f
/// and gcd(x^(p^(n/r)) - x, f) = 1 for every prime r | n.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() as u32 - 1;
    if n == 1 {
        return true;
    }
    let x = rem(&[0, 1], f, p);
    if x_pow_p_iter(f, p, n) != x {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|r| {
        let h = sub(&x_pow_p_iter(f, p, n / r as u32), &x, p);
        gcd(f, &h, p).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        // x^4 + 1 over F_3 splits into two quadratics, no roots.
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3));
        assert!(is_irreducible(&[2, 1, 0, 0, 1], 3));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over F_3 is (81 - 9) / 4 = 18.
        let mut count = 0;
        for t in 0..81u64 {
            let f = vec![t % 3, t / 3 % 3, t / 9 % 3, t / 27, 1];
            if is_irreducible(&f, 3) {
                count += 1;
            }
        }
        assert_eq!(count, 18);
    }
}
