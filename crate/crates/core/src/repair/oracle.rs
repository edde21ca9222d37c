use thiserror::Error;

use super::stream::{Exhaustion, RepairRun, SearchConfig};
use super::{Endomorphism, Spec, Transformation};

/// Largest pool the brute-force oracle accepts.
pub const ORACLE_POOL_LIMIT: usize = 20;

#[derive(Debug, Error)]
pub enum OracleError<E> {
    #[error("pool has {size} endomorphisms; the oracle accepts at most {limit}")]
    PoolTooLarge { size: usize, limit: usize },
    #[error("spec evaluation failed: {0}")]
    Spec(E),
}

/// Brute-force prime repairs: every subset of `pool` is tried.
///
/// A subset is a repair when it is well defined and its application satisfies
/// the spec. A repair is prime when no proper subset of it is a repair; this is
/// decided with a superset-sum table over all 2^n masks, independently of the
/// incremental enumerator. The result is sorted by cardinality then keys.
pub fn oracle_prime_repairs<E, P>(
    spec: &P,
    structure: &E::Structure,
    pool: &[E],
) -> Result<Vec<Transformation<E>>, OracleError<P::Error>>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
{
    let mut pool = pool.to_vec();
    pool.sort_by_key(|e| e.key());
    pool.dedup_by(|a, b| a.key() == b.key());
    let n = pool.len();
    if n > ORACLE_POOL_LIMIT {
        return Err(OracleError::PoolTooLarge {
            size: n,
            limit: ORACLE_POOL_LIMIT,
        });
    }

    let mut clash = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && !pool[i].commutes_with(&pool[j]) {
                clash[i] |= 1 << j;
            }
        }
    }
    let well_defined =
        |mask: u32| (0..n).all(|i| mask & (1 << i) == 0 || clash[i] & mask == 0);

    let size = 1usize << n;
    let mut is_repair = vec![false; size];
    for mask in 0..size as u32 {
        if !well_defined(mask) {
            continue;
        }
        let mut s = structure.clone();
        for (i, endo) in pool.iter().enumerate() {
            if mask & (1 << i) != 0 {
                endo.apply_in_place(&mut s);
            }
        }
        is_repair[mask as usize] = spec.holds(&s).map_err(OracleError::Spec)?;
    }

    // has_sub[m]: some submask of m (m included) is a repair.
    let mut has_sub = is_repair.clone();
    for bit in 0..n {
        for mask in 0..size {
            if mask & (1 << bit) != 0 && has_sub[mask ^ (1 << bit)] {
                has_sub[mask] = true;
            }
        }
    }

    let mut primes: Vec<Transformation<E>> = (0..size)
        .filter(|&m| is_repair[m])
        .filter(|&m| (0..n).all(|i| m & (1 << i) == 0 || !has_sub[m ^ (1 << i)]))
        .map(|m| {
            (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| pool[i].clone())
                .collect()
        })
        .collect();
    primes.sort();
    Ok(primes)
}

/// [`oracle_prime_repairs`] under the limits and filter of `config`, with the
/// exhaustion reason the incremental enumerator would report for them.
pub fn oracle_run<E, P>(
    spec: &P,
    structure: &E::Structure,
    pool: impl IntoIterator<Item = E>,
    config: SearchConfig<E>,
) -> Result<RepairRun<E>, OracleError<P::Error>>
where
    E: Endomorphism,
    P: Spec<E::Structure>,
{
    let mut pool: Vec<E> = pool
        .into_iter()
        .filter(|e| config.endo_filter.as_ref().map_or(true, |keep| keep(e)))
        .collect();
    pool.sort_by_key(|e| e.key());
    pool.dedup_by(|a, b| a.key() == b.key());
    let pool_size = pool.len();
    let all = oracle_prime_repairs(spec, structure, &pool)?;
    let satisfied = all.first().is_some_and(Transformation::is_empty);

    let mut repairs: Vec<Transformation<E>> = all
        .into_iter()
        .filter(|t| config.max_cardinality.map_or(true, |m| t.len() <= m))
        .collect();
    let reason = if config.max_repairs.is_some_and(|m| repairs.len() >= m) {
        repairs.truncate(config.max_repairs.unwrap_or(0));
        Exhaustion::MaxRepairs
    } else if !satisfied && config.max_cardinality.is_some_and(|m| m < pool_size) {
        Exhaustion::MaxCardinality
    } else {
        Exhaustion::Complete
    };
    Ok(RepairRun {
        repairs,
        reason,
        pool_size,
    })
}
