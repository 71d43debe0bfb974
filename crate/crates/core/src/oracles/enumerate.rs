use crate::error::{Error, Result};
use crate::model::Allocation;

/// `agents^items`, saturating.
pub fn allocation_count(agents: usize, items: usize) -> u128 {
    (0..items).fold(1u128, |acc, _| acc.saturating_mul(agents as u128))
}

/// Every allocation of the first `items` items among `agents` agents.
///
/// Ordered lexicographically by owner vector, the owner of the first item
/// being the most significant position.
pub fn enumerate_allocations(agents: usize, items: usize, cap: u128) -> Result<Vec<Allocation>> {
    let needed = allocation_count(agents, items);
    if needed > cap {
        return Err(Error::Capacity {
            what: "allocation enumeration",
            needed,
            cap,
        });
    }
    let mut owners = vec![0usize; items];
    let mut all = Vec::with_capacity(needed as usize);
    loop {
        all.push(Allocation::from_owners(agents, &owners));
        // odometer increment, last position fastest
        let mut position = items;
        loop {
            if position == 0 {
                return Ok(all);
            }
            position -= 1;
            owners[position] += 1;
            if owners[position] < agents {
                break;
            }
            owners[position] = 0;
        }
    }
}
