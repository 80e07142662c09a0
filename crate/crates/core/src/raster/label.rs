//! Two-pass connected-component labeling with a union-find table.

use alloc::vec;
use alloc::vec::Vec;

use super::{BinaryImage, BoundingBox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    Four,
    #[default]
    Eight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Component {
    /// 1-based, contiguous in reading order.
    pub label: u32,
    pub bbox: BoundingBox,
    pub area: usize,
}

/// Label map plus the component table; `labels[i] == 0` is background.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    pub components: Vec<Component>,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

fn merge_neighbor(l: u32, current: &mut u32, parent: &mut [u32]) {
    if l != 0 {
        *current = if *current == 0 {
            find(parent, l)
        } else {
            union(parent, *current, l)
        };
    }
}

fn union(parent: &mut [u32], a: u32, b: u32) -> u32 {
    let ra = find(parent, a);
    let rb = find(parent, b);
    let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
    parent[hi as usize] = lo;
    lo
}

/// Label every connected ink region. Components are ordered by
/// `(bbox.y, bbox.x)`, then by first pixel in raster order.
pub fn label_map(img: &BinaryImage, connectivity: Connectivity) -> Labeling {
    let (w, h) = (img.width(), img.height());
    let data = img.data();
    let mut labels = vec![0u32; w * h];
    // parent[0] is the background sentinel.
    let mut parent: Vec<u32> = vec![0];

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if data[i] == 0 {
                continue;
            }
            let mut current = 0u32;
            if x > 0 {
                merge_neighbor(labels[i - 1], &mut current, &mut parent);
            }
            if y > 0 {
                merge_neighbor(labels[i - w], &mut current, &mut parent);
                if connectivity == Connectivity::Eight {
                    if x > 0 {
                        merge_neighbor(labels[i - w - 1], &mut current, &mut parent);
                    }
                    if x + 1 < w {
                        merge_neighbor(labels[i - w + 1], &mut current, &mut parent);
                    }
                }
            }
            if current == 0 {
                current = parent.len() as u32;
                parent.push(current);
            }
            labels[i] = current;
        }
    }

    // Per-root statistics: bbox corners, area, first pixel index.
    struct Stats {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        area: usize,
        first: usize,
    }
    let mut root_slot = vec![u32::MAX; parent.len()];
    let mut stats: Vec<Stats> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let l = labels[i];
            if l == 0 {
                continue;
            }
            let r = find(&mut parent, l) as usize;
            if root_slot[r] == u32::MAX {
                root_slot[r] = stats.len() as u32;
                stats.push(Stats {
                    x0: x,
                    y0: y,
                    x1: x,
                    y1: y,
                    area: 0,
                    first: i,
                });
            }
            let s = &mut stats[root_slot[r] as usize];
            s.x0 = s.x0.min(x);
            s.x1 = s.x1.max(x);
            s.y1 = y;
            s.area += 1;
            labels[i] = root_slot[r];
        }
    }

    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by_key(|&k| (stats[k].y0, stats[k].x0, stats[k].first));
    let mut final_label = vec![0u32; stats.len()];
    let components = order
        .iter()
        .enumerate()
        .map(|(n, &k)| {
            final_label[k] = n as u32 + 1;
            let s = &stats[k];
            Component {
                label: n as u32 + 1,
                bbox: BoundingBox::from_corners(s.x0, s.y0, s.x1, s.y1),
                area: s.area,
            }
        })
        .collect();
    for (i, l) in labels.iter_mut().enumerate() {
        if data[i] != 0 {
            *l = final_label[*l as usize];
        }
    }

    Labeling {
        width: w,
        height: h,
        labels,
        components,
    }
}

pub fn label_components(img: &BinaryImage, connectivity: Connectivity) -> Vec<Component> {
    label_map(img, connectivity).components
}
