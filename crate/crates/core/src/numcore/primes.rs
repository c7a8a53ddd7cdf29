use std::sync::OnceLock;

use primal::Sieve;

use crate::error::{Error, Result};

/// Sieve bound; trial division by the sieved primes factors anything up to
/// its square.
pub const SIEVE_LIMIT: usize = 1_000_000;

fn sieve() -> &'static Sieve {
    static SIEVE: OnceLock<Sieve> = OnceLock::new();
    SIEVE.get_or_init(|| Sieve::new(SIEVE_LIMIT))
}

/// Prime factorization as (p, e) pairs in increasing p. Fails with a budget
/// error above `SIEVE_LIMIT²`.
pub fn factor(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let limit = (SIEVE_LIMIT as u64).pow(2);
    if n > limit {
        return Err(Error::Budget(format!("{n} exceeds the factorization cap {limit}")));
    }
    sieve()
        .factor(n as usize)
        .map(|f| f.into_iter().map(|(p, e)| (p as u64, e as u32)).collect())
        .map_err(|_| Error::Budget(format!("could not factor {n}")))
}

pub fn is_prime(n: u64) -> bool {
    if n < SIEVE_LIMIT as u64 {
        sieve().is_prime(n as usize)
    } else {
        matches!(factor(n).as_deref(), Ok([(_, 1)]))
    }
}

/// Primes p ≤ n in increasing order.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < SIEVE_LIMIT as u64 {
        sieve().primes_from(0).take_while(|&p| p as u64 <= n).map(|p| p as u64).collect()
    } else {
        (2..=n).filter(|&k| is_prime(k)).collect()
    }
}
