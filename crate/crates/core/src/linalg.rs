
use crate::field::Field;

/// Rank of a dense matrix by Gaussian elimination.
pub(crate) fn rank<K: Field>(mut rows: Vec<Vec<K>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].try_inv().unwrap();
        let pivot_row: Vec<K> = rows[rank].iter().map(|x| x.clone() * inv.clone()).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - factor.clone() * p.clone();
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}
