//! Zhang-Suen thinning with a topology guard.
//!
//! Each sub-iteration marks candidates with the classic Zhang-Suen tests on
//! a snapshot, then deletes them one at a time in raster order, re-checking
//! against the live image that the pixel is still a simple point (Yokoi
//! 8-connectivity number of 1) and not an end point. Plain parallel
//! Zhang-Suen erases 2x2 blocks and can split 2-pixel diagonals; the guard
//! keeps the 8-connected component count fixed.

use alloc::vec::Vec;

use crate::raster::BinaryImage;

/// Neighbours P2..P9: N, NE, E, SE, S, SW, W, NW.
const RING: [(isize, isize); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

fn ring(img: &BinaryImage, x: usize, y: usize) -> [u8; 8] {
    let (x, y) = (x as isize, y as isize);
    let mut p = [0u8; 8];
    for (v, (dx, dy)) in p.iter_mut().zip(RING) {
        *v = img.get_or_zero(x + dx, y + dy);
    }
    p
}

/// Number of 0 -> 1 transitions walking P2, P3, ..., P9, P2.
fn transitions(p: &[u8; 8]) -> u32 {
    (0..8).filter(|&i| p[i] == 0 && p[(i + 1) % 8] == 1).count() as u32
}

fn neighbours(p: &[u8; 8]) -> u32 {
    p.iter().map(|&v| v as u32).sum()
}

/// Yokoi connectivity number for 8-connected foreground. Deleting a pixel
/// preserves topology exactly when this is 1.
fn connectivity_number(p: &[u8; 8]) -> i32 {
    // Yokoi walks E, NE, N, NW, W, SW, S, SE on complemented values.
    let order = [2usize, 1, 0, 7, 6, 5, 4, 3];
    let c = |k: usize| 1 - p[order[k % 8]] as i32;
    (0..4)
        .map(|i| {
            let k = 2 * i;
            c(k) - c(k) * c(k + 1) * c(k + 2)
        })
        .sum()
}

fn candidate(p: &[u8; 8], first: bool) -> bool {
    let b = neighbours(p);
    if !(2..=6).contains(&b) || transitions(p) != 1 {
        return false;
    }
    let [p2, _, p4, _, p6, _, p8, _] = *p;
    if first {
        p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0
    } else {
        p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0
    }
}

fn sub_iteration(img: &mut BinaryImage, first: bool) -> bool {
    let marked: Vec<(usize, usize)> = (0..img.height())
        .flat_map(|y| (0..img.width()).map(move |x| (x, y)))
        .filter(|&(x, y)| img.is_ink(x, y) && candidate(&ring(img, x, y), first))
        .collect();
    let mut changed = false;
    for (x, y) in marked {
        let p = ring(img, x, y);
        if neighbours(&p) >= 2 && connectivity_number(&p) == 1 {
            img.set(x, y, 0);
            changed = true;
        }
    }
    changed
}

/// Thin strokes to one pixel wide. Never adds ink, keeps the number of
/// 8-connected components, and `thin(thin(x)) == thin(x)`.
pub fn thin(img: &BinaryImage) -> BinaryImage {
    let mut out = img.clone();
    loop {
        let a = sub_iteration(&mut out, true);
        let b = sub_iteration(&mut out, false);
        if !a && !b {
            return out;
        }
    }
}
