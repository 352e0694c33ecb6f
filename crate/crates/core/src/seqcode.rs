//! Prime-power codes of finite sequences and the order-preserving bijection `pi`.
//!
//! `c(s) = prod_i p_i^(s(i)+1)`. Sequences of length at least 2 are ranked by
//! their codes; `pi(s)` is that rank and `pi(<n>) = -1`.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::tree::{fmt_seq, Seq};

pub const PRIMES: [u64; 32] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131,
];

/// `c(s)`. Overflow of 128 bits is a horizon error.
pub fn prime_code(s: &[u64]) -> Result<u128> {
    if s.is_empty() {
        return Err(Error::Precondition("the empty sequence has no code".into()));
    }
    if s.len() > PRIMES.len() {
        return Err(Error::horizon(format!("sequences longer than {} are not coded", PRIMES.len())));
    }
    let overflow = || Error::horizon(format!("code of {} exceeds 128 bits", fmt_seq(s)));
    let mut c: u128 = 1;
    for (i, &e) in s.iter().enumerate() {
        let e = u32::try_from(e).map_err(|_| overflow())?.checked_add(1).ok_or_else(overflow)?;
        let pe = (PRIMES[i] as u128).checked_pow(e).ok_or_else(overflow)?;
        c = c.checked_mul(pe).ok_or_else(overflow)?;
    }
    Ok(c)
}

pub fn prime_code_big(s: &[u64]) -> Result<BigUint> {
    if s.is_empty() {
        return Err(Error::Precondition("the empty sequence has no code".into()));
    }
    if s.len() > PRIMES.len() {
        return Err(Error::horizon(format!("sequences longer than {} are not coded", PRIMES.len())));
    }
    let mut c = BigUint::one();
    for (i, &e) in s.iter().enumerate() {
        let e = u32::try_from(e + 1).map_err(|_| Error::horizon("exponent too large"))?;
        c *= BigUint::from(PRIMES[i]).pow(e);
    }
    Ok(c)
}

/// Inverse of `prime_code` on its image.
pub fn decode(mut c: u128) -> Option<Seq> {
    let mut s = Vec::new();
    for &p in &PRIMES {
        if c == 1 {
            break;
        }
        let p = p as u128;
        let mut e = 0;
        while c % p == 0 {
            c /= p;
            e += 1;
        }
        if e == 0 {
            return None;
        }
        s.push(e - 1);
    }
    (c == 1 && !s.is_empty()).then_some(s)
}

// numbers <= x whose prime factors are among the first j primes
fn psi(x: u128, j: usize, memo: &mut HashMap<(u128, usize), u128>) -> u128 {
    if x == 0 {
        return 0;
    }
    match j {
        0 => return 1,
        1 => return (128 - x.leading_zeros()) as u128,
        _ => {}
    }
    let p = PRIMES[j - 1] as u128;
    if x < p {
        return psi(x, j - 1, memo);
    }
    if let Some(&v) = memo.get(&(x, j)) {
        return v;
    }
    let mut total = 0;
    let mut y = x;
    loop {
        total += psi(y, j - 1, memo);
        if y < p {
            break;
        }
        y /= p;
    }
    memo.insert((x, j), total);
    total
}

/// Number of codes `<= b` of sequences of length at least 2.
///
/// A code of a length-k sequence is the product of the first k primes times a
/// number built from those same primes, which gives one smooth-number count per k.
pub fn count_codes(b: u128) -> u128 {
    let mut memo = HashMap::new();
    let mut total = 0;
    let mut primorial: u128 = 2;
    for k in 2..=PRIMES.len() {
        primorial = match primorial.checked_mul(PRIMES[k - 1] as u128) {
            Some(v) if v <= b => v,
            _ => break,
        };
        total += psi(b / primorial, k, &mut memo);
    }
    total
}

/// `pi(s)`: -1 on length 1, otherwise the rank of `c(s)` among codes of
/// sequences of length at least 2.
pub fn pi(s: &[u64]) -> Result<i64> {
    match s.len() {
        0 => Err(Error::Precondition("pi is undefined on the empty sequence".into())),
        1 => Ok(-1),
        _ => {
            let c = prime_code(s)?;
            {
                let t = shared_table().read().unwrap();
                if c <= t.bound {
                    let rank = t.entries.partition_point(|(d, _)| *d < c);
                    return Ok(rank as i64);
                }
            }
            i64::try_from(count_codes(c - 1)).map_err(|_| Error::horizon("pi exceeds 64 bits"))
        }
    }
}

/// `pi(s) >= n`, exactly, for codes of any size.
pub fn pi_at_least(s: &[u64], n: u64) -> Result<bool> {
    match s.len() {
        0 => return Err(Error::Precondition("pi is undefined on the empty sequence".into())),
        1 => return Ok(false),
        _ => {}
    }
    let c = prime_code_big(s)?;
    Ok(capped_count_below(&c, n) >= n)
}

// codes < b of length >= 2, stopping once `cap` are found
fn capped_count_below(b: &BigUint, cap: u64) -> u64 {
    fn go(i: usize, cur: &BigUint, b: &BigUint, cap: u64, found: &mut u64) {
        if i >= PRIMES.len() || *found >= cap {
            return;
        }
        let mut c = cur * PRIMES[i];
        while &c < b {
            if i >= 1 {
                *found += 1;
                if *found >= cap {
                    return;
                }
            }
            go(i + 1, &c, b, cap, found);
            if *found >= cap {
                return;
            }
            c *= PRIMES[i];
        }
    }
    let mut found = 0;
    if cap > 0 {
        go(0, &BigUint::one(), b, cap, &mut found);
    }
    found
}

/// All codes `<= bound` of sequences of length at least 2, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeTable {
    bound: u128,
    entries: Vec<(u128, Seq)>,
}

impl CodeTable {
    pub fn build(bound: u128) -> CodeTable {
        fn go(i: usize, cur: u128, seq: &mut Seq, bound: u128, out: &mut Vec<(u128, Seq)>) {
            if i >= PRIMES.len() {
                return;
            }
            let p = PRIMES[i] as u128;
            let mut c = cur;
            let mut e = 0;
            while let Some(next) = c.checked_mul(p).filter(|&v| v <= bound) {
                c = next;
                seq.push(e);
                if seq.len() >= 2 {
                    out.push((c, seq.clone()));
                }
                go(i + 1, c, seq, bound, out);
                seq.pop();
                e += 1;
            }
        }
        let mut entries = Vec::new();
        go(0, 1, &mut Vec::new(), bound, &mut entries);
        entries.sort_unstable();
        CodeTable { bound, entries }
    }

    pub fn bound(&self) -> u128 {
        self.bound
    }

    pub fn entries(&self) -> &[(u128, Seq)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn shared_table() -> &'static RwLock<CodeTable> {
    static TABLE: OnceLock<RwLock<CodeTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(CodeTable::build(1 << 12)))
}

/// Ranks served by [`pi_inverse`]; the table behind it stays below this size.
pub const PI_INVERSE_LIMIT: u64 = 1 << 20;

/// The sequence of rank `n`.
pub fn pi_inverse(n: u64) -> Result<Seq> {
    if n >= PI_INVERSE_LIMIT {
        return Err(Error::horizon(format!("pi_inverse({n}) is past the table limit {PI_INVERSE_LIMIT}")));
    }
    loop {
        {
            let t = shared_table().read().unwrap();
            if let Some((_, s)) = t.entries.get(n as usize) {
                return Ok(s.clone());
            }
        }
        let mut t = shared_table().write().unwrap();
        if (t.entries.len() as u64) <= n {
            let bound = t.bound.checked_mul(4).ok_or_else(|| Error::horizon("code table bound overflow"))?;
            *t = CodeTable::build(bound);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_examples() {
        assert_eq!(prime_code(&[0, 0]).unwrap(), 6);
        assert_eq!(prime_code(&[1]).unwrap(), 4);
        assert_eq!(prime_code(&[0, 0, 0]).unwrap(), 30);
        assert!(prime_code(&[200, 0]).unwrap_err().is_horizon());
        assert_eq!(decode(prime_code(&[3, 0, 2]).unwrap()), Some(vec![3, 0, 2]));
        assert_eq!(decode(10), None);
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi(&[7]).unwrap(), -1);
        assert_eq!(pi(&[0, 0]).unwrap(), 0);
        assert_eq!(pi(&[1, 0]).unwrap(), 1);
        assert_eq!(pi(&[0, 1]).unwrap(), 2);
        assert_eq!(pi_inverse(0).unwrap(), vec![0, 0]);
        assert_eq!(pi_inverse(1).unwrap(), vec![1, 0]);
        assert!(pi(&[]).is_err());
    }

    #[test]
    fn table_matches_count() {
        let t = CodeTable::build(1 << 20);
        for (rank, (c, s)) in t.entries().iter().enumerate() {
            assert_eq!(count_codes(c - 1), rank as u128);
            assert_eq!(prime_code(s).unwrap(), *c);
        }
    }

    #[test]
    fn big_lower_bound() {
        assert!(pi_at_least(&[4, 0], 11).unwrap());
        assert!(!pi_at_least(&[4, 0], 12).unwrap());
        assert!(pi_at_least(&[900, 0], 900).unwrap());
    }
}
