//! Finite cubic lattice: sites, canonically oriented links and plaquettes of
//! an integer box with open boundary.
//!
//! Sites are ordered lexicographically by coordinates, links by source site
//! and then axis (x < y < z), plaquettes by base site and then plane
//! (xy < xz < yz). A link always points along a positive axis.

use crate::error::{LgkError, Result};
use std::collections::{BTreeSet, HashMap};

pub type Site = [i64; 3];

/// Closed axis-aligned integer box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Region {
    pub lo: [i64; 3],
    pub hi: [i64; 3],
}

impl Region {
    pub fn new(lo: [i64; 3], hi: [i64; 3]) -> Result<Self> {
        if (0..3).any(|a| lo[a] > hi[a]) {
            return Err(LgkError::InvalidRegion { lo, hi });
        }
        Ok(Region { lo, hi })
    }

    pub fn contains(&self, x: &Site) -> bool {
        (0..3).all(|a| self.lo[a] <= x[a] && x[a] <= self.hi[a])
    }

    pub fn intersects(&self, other: &Region) -> bool {
        (0..3).all(|a| self.lo[a].max(other.lo[a]) <= self.hi[a].min(other.hi[a]))
    }

    /// Lexicographically ordered integer points of the box.
    pub fn points(&self) -> Vec<Site> {
        let mut out = Vec::new();
        for x in self.lo[0]..=self.hi[0] {
            for y in self.lo[1]..=self.hi[1] {
                for z in self.lo[2]..=self.hi[2] {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }
}

/// Componentwise box inclusion `a ⊆ b`.
pub fn is_subregion(a: &Region, b: &Region) -> bool {
    (0..3).all(|k| b.lo[k] <= a.lo[k] && a.hi[k] <= b.hi[k])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Link {
    pub source: Site,
    pub target: Site,
    pub axis: usize,
    pub index: usize,
}

/// Four (link index, traversal sign) steps closing a unit square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaquette {
    pub base: Site,
    pub plane: (usize, usize),
    pub links: [(usize, i8); 4],
}

#[derive(Debug, Clone)]
pub struct LatticeGraph {
    pub region: Region,
    pub sites: Vec<Site>,
    pub links: Vec<Link>,
    pub plaquettes: Vec<Plaquette>,
    site_index: HashMap<Site, usize>,
    link_index: HashMap<(Site, usize), usize>,
}

pub fn unit(axis: usize) -> [i64; 3] {
    let mut e = [0; 3];
    e[axis] = 1;
    e
}

pub fn add(x: Site, d: [i64; 3]) -> Site {
    [x[0] + d[0], x[1] + d[1], x[2] + d[2]]
}

pub fn build_lattice(region: Region) -> LatticeGraph {
    let sites = region.points();
    let site_index: HashMap<Site, usize> = sites.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut links = Vec::new();
    let mut link_index = HashMap::new();
    for s in &sites {
        for axis in 0..3 {
            let t = add(*s, unit(axis));
            if region.contains(&t) {
                link_index.insert((*s, axis), links.len());
                links.push(Link { source: *s, target: t, axis, index: links.len() });
            }
        }
    }
    let mut plaquettes = Vec::new();
    for s in &sites {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let far = add(add(*s, unit(i)), unit(j));
            if !region.contains(&far) {
                continue;
            }
            let l1 = link_index[&(*s, i)];
            let l2 = link_index[&(add(*s, unit(i)), j)];
            let l3 = link_index[&(add(*s, unit(j)), i)];
            let l4 = link_index[&(*s, j)];
            plaquettes.push(Plaquette { base: *s, plane: (i, j), links: [(l1, 1), (l2, 1), (l3, -1), (l4, -1)] });
        }
    }
    LatticeGraph { region, sites, links, plaquettes, site_index, link_index }
}

impl LatticeGraph {
    pub fn site_index(&self, x: &Site) -> Option<usize> {
        self.site_index.get(x).copied()
    }

    pub fn require_site(&self, x: &Site) -> Result<usize> {
        self.site_index(x).ok_or(LgkError::SiteNotInGraph(*x))
    }

    /// Index of the link joining two nearest neighbours, with the traversal
    /// sign of going from `a` to `b`.
    pub fn link_between(&self, a: &Site, b: &Site) -> Option<(usize, i8)> {
        for axis in 0..3 {
            if add(*a, unit(axis)) == *b {
                return self.link_index.get(&(*a, axis)).map(|&l| (l, 1));
            }
            if add(*b, unit(axis)) == *a {
                return self.link_index.get(&(*b, axis)).map(|&l| (l, -1));
            }
        }
        None
    }

    /// Outgoing (source = x) and incoming (target = x) links at a site.
    pub fn links_at(&self, x: &Site) -> Result<(Vec<Link>, Vec<Link>)> {
        self.require_site(x)?;
        let out = self.links.iter().filter(|l| l.source == *x).cloned().collect();
        let inc = self.links.iter().filter(|l| l.target == *x).cloned().collect();
        Ok((out, inc))
    }

    /// Sites incident to a link meeting `region`. A region disjoint from the
    /// lattice has an empty envelope; a region only partially inside the
    /// lattice is rejected.
    pub fn envelope(&self, region: &Region) -> Result<BTreeSet<Site>> {
        if !region.intersects(&self.region) {
            return Ok(BTreeSet::new());
        }
        if !is_subregion(region, &self.region) {
            return Err(LgkError::InvalidNesting(format!(
                "region {:?}..{:?} is not contained in lattice {:?}..{:?}",
                region.lo, region.hi, self.region.lo, self.region.hi
            )));
        }
        let mut env: BTreeSet<Site> = self.sites.iter().filter(|s| region.contains(s)).cloned().collect();
        for l in &self.links {
            if region.contains(&l.source) || region.contains(&l.target) {
                env.insert(l.source);
                env.insert(l.target);
            }
        }
        Ok(env)
    }

    /// Links with at least one endpoint inside `region`.
    pub fn links_meeting(&self, region: &Region) -> Vec<usize> {
        self.links.iter().filter(|l| region.contains(&l.source) || region.contains(&l.target)).map(|l| l.index).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(lo: [i64; 3], hi: [i64; 3]) -> Region {
        Region::new(lo, hi).unwrap()
    }

    #[test]
    fn counts() {
        let g = build_lattice(r([0, 0, 0], [0, 0, 0]));
        assert_eq!((g.sites.len(), g.links.len(), g.plaquettes.len()), (1, 0, 0));
        let g = build_lattice(r([0, 0, 0], [1, 1, 0]));
        assert_eq!((g.sites.len(), g.links.len(), g.plaquettes.len()), (4, 4, 1));
        let g = build_lattice(r([0, 0, 0], [1, 1, 1]));
        assert_eq!((g.sites.len(), g.links.len(), g.plaquettes.len()), (8, 12, 6));
    }

    #[test]
    fn square_link_order() {
        let g = build_lattice(r([0, 0, 0], [1, 1, 0]));
        let ends: Vec<(Site, Site)> = g.links.iter().map(|l| (l.source, l.target)).collect();
        assert_eq!(ends, vec![([0, 0, 0], [1, 0, 0]), ([0, 0, 0], [0, 1, 0]), ([0, 1, 0], [1, 1, 0]), ([1, 0, 0], [1, 1, 0]),]);
        assert_eq!(g.plaquettes[0].links, [(0, 1), (3, 1), (2, -1), (1, -1)]);
    }

    #[test]
    fn invalid_region() {
        assert!(Region::new([1, 0, 0], [0, 0, 0]).is_err());
    }

    #[test]
    fn links_at_examples() {
        let g = build_lattice(r([0, 0, 0], [1, 1, 1]));
        let (out, inc) = g.links_at(&[0, 0, 0]).unwrap();
        assert_eq!((out.len(), inc.len()), (3, 0));
        let g = build_lattice(r([0, 0, 0], [2, 2, 2]));
        let (out, inc) = g.links_at(&[1, 1, 1]).unwrap();
        assert_eq!((out.len(), inc.len()), (3, 3));
        let g = build_lattice(r([0, 0, 0], [0, 0, 0]));
        let (out, inc) = g.links_at(&[0, 0, 0]).unwrap();
        assert!(out.is_empty() && inc.is_empty());
        assert!(g.links_at(&[5, 0, 0]).is_err());
    }

    #[test]
    fn envelope_examples() {
        let g = build_lattice(r([0, 0, 0], [1, 1, 1]));
        assert_eq!(g.envelope(&g.region).unwrap().len(), 8);
        let corner = g.envelope(&r([0, 0, 0], [0, 0, 0])).unwrap();
        let expected: BTreeSet<Site> = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]].into_iter().collect();
        assert_eq!(corner, expected);
        assert!(g.envelope(&r([5, 5, 5], [6, 6, 6])).unwrap().is_empty());
        assert!(g.envelope(&r([1, 1, 1], [2, 2, 2])).is_err());
    }

    #[test]
    fn subregions() {
        let a = r([0, 0, 0], [1, 1, 1]);
        assert!(is_subregion(&a, &a));
        assert!(!is_subregion(&a, &r([5, 5, 5], [6, 6, 6])));
        assert!(is_subregion(&a, &r([0, 0, 0], [2, 2, 2])));
    }
}
