use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::scalar::Rational;
use crate::error::{Error, Result};

/// A chiral field: gauge weight, R-charge and twisted mass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matter {
    pub weight: Vec<i64>,
    pub r_charge: i64,
    /// Linear form in the named mass parameters (`lambda1`, `mu`, ..).
    pub mass: Poly,
}

impl Matter {
    pub fn new(weight: Vec<i64>, r_charge: i64) -> Self {
        Matter { weight, r_charge, mass: Poly::zero(&[] as &[&str]) }
    }

    pub fn with_mass(mut self, mass: Poly) -> Self {
        self.mass = mass;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Plain,
    Gm,
    H,
    HGm,
}

impl Variant {
    pub fn equivariant_h(self) -> bool {
        matches!(self, Variant::H | Variant::HGm)
    }

    pub fn equivariant_gm(self) -> bool {
        matches!(self, Variant::Gm | Variant::HGm)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlsmModel {
    rank: usize,
    matter: Vec<Matter>,
    roots: Vec<Vec<i64>>,
    weyl_order: u64,
    /// Transpositions generating the Weyl group.
    weyl_generators: Vec<(usize, usize)>,
    eta: Vec<Rational>,
    degree_cone: Vec<Vec<i64>>,
    series_vars: Vec<String>,
    series_map: Vec<Vec<i64>>,
    params: BTreeMap<String, Rational>,
}

impl GlsmModel {
    /// Abelian models get one series variable per gauge factor; models with roots
    /// get a single `q` graded by `|d|`. The degree cone defaults to the orthant.
    pub fn new(rank: usize, matter: Vec<Matter>, roots: Vec<Vec<i64>>, eta: Vec<Rational>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidModel("rank must be positive".into()));
        }
        if eta.len() != rank {
            return Err(Error::InvalidModel("FI vector length differs from rank".into()));
        }
        for m in &matter {
            if m.weight.len() != rank {
                return Err(Error::InvalidModel(format!("weight {:?} has wrong length", m.weight)));
            }
            if m.r_charge % 2 != 0 {
                return Err(Error::InvalidModel(format!("R-charge {} is odd; only even R-charges are supported", m.r_charge)));
            }
            if m.mass.total_degree().unwrap_or(0) > 1 {
                return Err(Error::InvalidModel("twisted masses must be affine linear".into()));
            }
        }
        let (weyl_order, weyl_generators) = weyl_data(rank, &roots)?;
        let (series_vars, series_map) = if roots.is_empty() {
            let vars = if rank == 1 { vec!["q".to_string()] } else { (1..=rank).map(|i| format!("q{i}")).collect() };
            let map = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
            (vars, map)
        } else {
            (vec!["q".to_string()], vec![vec![1; rank]])
        };
        let degree_cone = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let m = GlsmModel {
            rank,
            matter,
            roots,
            weyl_order,
            weyl_generators,
            eta,
            degree_cone,
            series_vars,
            series_map,
            params: BTreeMap::new(),
        };
        m.check_cone()?;
        Ok(m)
    }

    pub fn with_degree_cone(mut self, rays: Vec<Vec<i64>>) -> Result<Self> {
        self.degree_cone = rays;
        self.check_cone()?;
        Ok(self)
    }

    pub fn with_series(mut self, vars: Vec<String>, map: Vec<Vec<i64>>) -> Result<Self> {
        if vars.len() != map.len() || map.iter().any(|row| row.len() != self.rank) {
            return Err(Error::InvalidModel("series map must have one row of length rank per series variable".into()));
        }
        self.series_vars = vars;
        self.series_map = map;
        self.check_cone()?;
        Ok(self)
    }

    pub fn with_params(mut self, params: BTreeMap<String, Rational>) -> Self {
        self.params = params;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matter(&self) -> &[Matter] {
        &self.matter
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn weyl_order(&self) -> u64 {
        self.weyl_order
    }

    pub fn eta(&self) -> &[Rational] {
        &self.eta
    }

    pub fn degree_cone(&self) -> &[Vec<i64>] {
        &self.degree_cone
    }

    pub fn series_vars(&self) -> &[String] {
        &self.series_vars
    }

    pub fn series_map(&self) -> &[Vec<i64>] {
        &self.series_map
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    pub fn param(&self, name: &str) -> Result<Rational> {
        self.params
            .get(name)
            .cloned()
            .ok_or_else(|| Error::InvalidModel(format!("parameter `{name}` is not bound")))
    }

    /// Gauge variables: `x` in rank one, else `x1..xr`.
    pub fn vars(&self) -> Vec<String> {
        if self.rank == 1 {
            vec!["x".into()]
        } else {
            (1..=self.rank).map(|i| format!("x{i}")).collect()
        }
    }

    /// Evaluated twisted masses.
    pub fn masses(&self) -> Result<Vec<Rational>> {
        self.matter
            .iter()
            .map(|m| {
                let point = m.mass.vars().iter().map(|v| self.param(v)).collect::<Result<Vec<_>>>()?;
                Ok(m.mass.eval(&point))
            })
            .collect()
    }

    pub fn series_degree(&self, d: &[i64]) -> Vec<i64> {
        self.series_map.iter().map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn check_weyl_invariant(&self, p: &Poly) -> Result<()> {
        for &(i, j) in &self.weyl_generators {
            let mut perm: Vec<usize> = (0..self.rank).collect();
            perm.swap(i, j);
            if p.permute(&perm) != *p {
                return Err(Error::NotWeylInvariant);
            }
        }
        Ok(())
    }

    fn grading(&self) -> Vec<i64> {
        (0..self.rank).map(|j| self.series_map.iter().map(|row| row[j]).sum()).collect()
    }

    fn check_cone(&self) -> Result<()> {
        let g = self.grading();
        for ray in &self.degree_cone {
            if ray.len() != self.rank {
                return Err(Error::InvalidModel("degree cone ray has wrong length".into()));
            }
            let s: i64 = ray.iter().zip(&g).map(|(a, b)| a * b).sum();
            if s <= 0 {
                return Err(Error::InvalidModel(format!("degree cone ray {ray:?} is not positively graded")));
            }
        }
        let rays: Vec<Vec<Rational>> = self.degree_cone.iter().map(|r| r.iter().map(|&c| Rational::from(c)).collect()).collect();
        if linalg::rank(&rays) != self.rank {
            return Err(Error::InvalidModel("degree cone must be full-dimensional".into()));
        }
        Ok(())
    }

    fn in_cone(&self, d: &[i64]) -> bool {
        let target: Vec<Rational> = d.iter().map(|&c| Rational::from(c)).collect();
        self.degree_cone.iter().combinations(self.rank).any(|sub| {
            let basis: Vec<Vec<Rational>> = sub.iter().map(|r| r.iter().map(|&c| Rational::from(c)).collect()).collect();
            linalg::rank(&basis) == self.rank
                && linalg::coordinates(&basis, &target).is_some_and(|c| c.iter().all(|x| !x.is_negative()))
        })
    }

    /// Lattice points of the degree cone whose series degree lies in `[0, cutoff]`,
    /// in lexicographic order.
    pub fn degrees(&self, cutoff: u32) -> Vec<Vec<i64>> {
        let g = self.grading();
        let total = cutoff as i64 * self.series_vars.len() as i64;
        let bound: Vec<i64> = (0..self.rank)
            .map(|j| {
                self.degree_cone
                    .iter()
                    .map(|ray| {
                        let gr: i64 = ray.iter().zip(&g).map(|(a, b)| a * b).sum();
                        (total * ray[j].abs() + gr - 1) / gr
                    })
                    .sum()
            })
            .collect();
        (0..self.rank)
            .map(|j| -bound[j]..=bound[j])
            .multi_cartesian_product()
            .filter(|d| {
                self.series_degree(d).iter().all(|&s| (0..=cutoff as i64).contains(&s)) && self.in_cone(d)
            })
            .collect()
    }
}

/// Order of the group generated by reflections in roots `e_i - e_j`, and generating transpositions.
fn weyl_data(rank: usize, roots: &[Vec<i64>]) -> Result<(u64, Vec<(usize, usize)>)> {
    let mut parent: Vec<usize> = (0..rank).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut gens = Vec::new();
    for a in roots {
        if a.len() != rank {
            return Err(Error::InvalidModel("root has wrong length".into()));
        }
        let plus: Vec<usize> = (0..rank).filter(|&k| a[k] == 1).collect();
        let minus: Vec<usize> = (0..rank).filter(|&k| a[k] == -1).collect();
        let zeros = a.iter().filter(|&&c| c == 0).count();
        if plus.len() != 1 || minus.len() != 1 || zeros != rank - 2 {
            return Err(Error::InvalidModel(format!("root {a:?} is not of the form e_i - e_j")));
        }
        gens.push((plus[0], minus[0]));
        let (x, y) = (find(&mut parent, plus[0]), find(&mut parent, minus[0]));
        parent[x] = y;
    }
    let mut sizes = vec![0u64; rank];
    for i in 0..rank {
        let root = find(&mut parent, i);
        sizes[root] += 1;
    }
    let order = sizes.iter().map(|&s| (1..=s).product::<u64>()).product();
    Ok((order, gens))
}
