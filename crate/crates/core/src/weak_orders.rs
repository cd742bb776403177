//! Enumeration of weak orders (ordered set partitions) on a small ground set.
//!
//! Every assignment of rational values is order-equivalent to a weak order on
//! the variables, so exhaustive search over weak orders is exhaustive search
//! over all assignments that matter.

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("weak order enumeration limited to {limit} elements, got {got}")]
pub struct SizeGuard {
    pub got: usize,
    pub limit: usize,
}

pub const MAX_ELEMENTS: usize = 12;

/// Calls `f` once for every weak order on `n` elements, passing the rank of
/// each element (ranks are consecutive starting at 0). The number of calls is
/// the ordered-Bell (Fubini) number of `n`. Enumeration order is fixed:
/// element `i` is placed into each existing rank class in ascending order,
/// then as a singleton class at each possible insertion position.
pub fn for_each_weak_order<F: FnMut(&[u64])>(n: usize, f: F) -> Result<(), SizeGuard> {
    if n > MAX_ELEMENTS {
        return Err(SizeGuard { got: n, limit: MAX_ELEMENTS });
    }
    let mut f = f;
    let mut ranks = vec![0u64; n];
    if n == 0 {
        f(&ranks);
        return Ok(());
    }
    place(0, 0, &mut ranks, &mut f);
    Ok(())
}

fn place<F: FnMut(&[u64])>(elem: usize, n_classes: u64, ranks: &mut [u64], f: &mut F) {
    let n = ranks.len();
    if elem == n {
        f(ranks);
        return;
    }
    // join an existing class
    for class in 0..n_classes {
        ranks[elem] = class;
        place(elem + 1, n_classes, ranks, f);
    }
    // open a new class at insertion position `gap`, shifting later classes up
    for gap in 0..=n_classes {
        for r in ranks[..elem].iter_mut() {
            if *r >= gap {
                *r += 1;
            }
        }
        ranks[elem] = gap;
        place(elem + 1, n_classes + 1, ranks, f);
        for r in ranks[..elem].iter_mut() {
            if *r > gap {
                *r -= 1;
            }
        }
    }
}

/// Materializes all weak orders on `n` elements. Intended for small `n`;
/// callers that only need a pass over the orders should prefer
/// [`for_each_weak_order`].
pub fn enumerate_weak_orders(n: usize) -> Result<Vec<Vec<u64>>, SizeGuard> {
    let mut out = Vec::new();
    for_each_weak_order(n, |ranks| out.push(ranks.to_vec()))?;
    Ok(out)
}
