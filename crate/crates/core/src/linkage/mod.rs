//! Linkages built from pairs of factor chains with equal products.
//!
//! Every chain starts at a common root body. The body reached after a prefix
//! of a chain is identified by that prefix; the two chains of a loop end in
//! the same body. Joints are the transitions between consecutive bodies.

mod export;
mod sample;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::dualquat::{classify_generator, DualQuaternion, Generator};
use crate::error::{Error, Result};
use crate::poly::DQPoly;
use crate::vec3::Vec3;

pub use export::{export, import_json, ExportFormat, ExportOptions};
pub use sample::{
    default_samples, loop_residual, rigidity_check, sample_configuration, spaced_samples, trajectory,
    ConfigurationSample, LinkDeviation, RigidityReport,
};

/// Relative residual allowed between the two chain products of a loop.
pub const CLOSURE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JointKind {
    Rotation,
    Translation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub id: String,
    /// `h` of the linear factor `t - h`.
    pub generator: DualQuaternion,
    pub kind: JointKind,
}

impl Joint {
    pub fn new(id: impl Into<String>, generator: DualQuaternion, tol: f64) -> Result<Joint> {
        let kind = match classify_generator(&generator, tol)? {
            Generator::Rotation { .. } => JointKind::Rotation,
            Generator::Translation { .. } => JointKind::Translation,
        };
        Ok(Joint {
            id: id.into(),
            generator,
            kind,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub id: String,
    pub joints: Vec<String>,
}

/// Two chains of joint ids whose products agree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopChains {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tracer {
    pub link: String,
    pub point: Vec3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linkage {
    pub joints: Vec<Joint>,
    pub links: Vec<Link>,
    pub loops: Vec<LoopChains>,
    pub ground: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tracer: Option<Tracer>,
}

/// A chain of named generators.
pub type Chain = Vec<(String, DualQuaternion)>;

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Bodies derived from the loop chains.
struct BodyStructure {
    /// Joint sets per body, in order of first appearance (root first).
    joint_sets: Vec<BTreeSet<String>>,
    /// Path from the root, as joint ids, per body.
    paths: Vec<Vec<String>>,
    /// Body before and after each joint.
    sides: HashMap<String, (usize, usize)>,
}

fn body_structure(loops: &[LoopChains]) -> Result<BodyStructure> {
    let mut keys: HashMap<Vec<String>, usize> = HashMap::new();
    let mut key_list: Vec<Vec<String>> = Vec::new();
    let mut body = |k: &[String]| -> usize {
        if let Some(&i) = keys.get(k) {
            return i;
        }
        keys.insert(k.to_vec(), key_list.len());
        key_list.push(k.to_vec());
        key_list.len() - 1
    };
    body(&[]);
    let mut occurrences: Vec<(String, usize, usize)> = Vec::new();
    let mut ends = Vec::new();
    for lp in loops {
        if lp.left.is_empty() || lp.right.is_empty() {
            return Err(Error::InvalidLinkGraph("loop with an empty chain".into()));
        }
        let mut last = [0usize; 2];
        for (side, chain) in [&lp.left, &lp.right].into_iter().enumerate() {
            for n in 0..chain.len() {
                let before = body(&chain[..n]);
                let after = body(&chain[..=n]);
                occurrences.push((chain[n].clone(), before, after));
                last[side] = after;
            }
        }
        ends.push((last[0], last[1]));
    }
    let n = key_list.len();
    let mut uf = UnionFind((0..n).collect());
    for (a, b) in ends {
        uf.union(a, b);
    }
    let mut first: HashMap<String, (usize, usize)> = HashMap::new();
    for (id, b, a) in &occurrences {
        match first.get(id) {
            Some(&(b0, a0)) => {
                uf.union(b0, *b);
                uf.union(a0, *a);
            }
            None => {
                first.insert(id.clone(), (*b, *a));
            }
        }
    }
    // classes in order of first appearance
    let mut class_of: HashMap<usize, usize> = HashMap::new();
    let mut paths: Vec<Vec<String>> = Vec::new();
    for (i, key) in key_list.iter().enumerate() {
        let r = uf.find(i);
        match class_of.get(&r) {
            Some(&c) => {
                if key.len() < paths[c].len() {
                    paths[c] = key.clone();
                }
            }
            None => {
                class_of.insert(r, paths.len());
                paths.push(key.clone());
            }
        }
    }
    let mut joint_sets = vec![BTreeSet::new(); paths.len()];
    let mut sides = HashMap::new();
    for (id, (b, a)) in first {
        let cb = class_of[&uf.find(b)];
        let ca = class_of[&uf.find(a)];
        if cb == ca {
            return Err(Error::InvalidLinkGraph(format!("joint {id} connects a link to itself")));
        }
        joint_sets[cb].insert(id.clone());
        joint_sets[ca].insert(id.clone());
        sides.insert(id, (cb, ca));
    }
    Ok(BodyStructure {
        joint_sets,
        paths,
        sides,
    })
}

/// Product of `t - h` over a chain.
pub fn chain_product(chain: &[DualQuaternion]) -> DQPoly {
    DQPoly::from_linear_factors(chain)
}

/// Builds a linkage from loops of named generator chains. Equal names denote
/// the same joint. The root body (before the first joint of every chain) is
/// the ground link.
pub fn assemble(loops: &[(Chain, Chain)], tol: f64) -> Result<Linkage> {
    let mut joints: Vec<Joint> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut chains = Vec::with_capacity(loops.len());
    for (n, (left, right)) in loops.iter().enumerate() {
        for (id, h) in left.iter().chain(right) {
            match index.get(id) {
                Some(&i) => {
                    if joints[i].generator.distance(h) > 1e-12 * h.max_abs().max(1.0) {
                        return Err(Error::InvalidLinkGraph(format!(
                            "joint {id} used with two different generators"
                        )));
                    }
                }
                None => {
                    index.insert(id.clone(), joints.len());
                    joints.push(Joint::new(id.clone(), *h, tol)?);
                }
            }
        }
        let lp: Vec<DualQuaternion> = left.iter().map(|x| x.1).collect();
        let rp: Vec<DualQuaternion> = right.iter().map(|x| x.1).collect();
        let (a, b) = (chain_product(&lp), chain_product(&rp));
        let residual = a.distance(&b) / (1.0 + a.max_abs().max(b.max_abs()));
        if residual > CLOSURE_TOL {
            return Err(Error::ClosureMismatch { index: n, residual });
        }
        chains.push(LoopChains {
            left: left.iter().map(|x| x.0.clone()).collect(),
            right: right.iter().map(|x| x.0.clone()).collect(),
        });
    }
    let bodies = body_structure(&chains)?;
    let links: Vec<Link> = bodies
        .joint_sets
        .iter()
        .enumerate()
        .map(|(i, s)| Link {
            id: format!("L{i}"),
            joints: s.iter().cloned().collect(),
        })
        .collect();
    let linkage = Linkage {
        joints,
        links,
        loops: chains,
        ground: "L0".into(),
        tracer: None,
    };
    linkage.kinematics()?;
    Ok(linkage)
}

/// Forward-kinematic data derived from a linkage.
#[derive(Clone, Debug)]
pub struct Kinematics {
    /// Generator sequence from the root to each link (indexed like `links`).
    pub paths: Vec<Vec<DualQuaternion>>,
    /// Link indices before and after each joint (indexed like `joints`).
    pub sides: Vec<(usize, usize)>,
    pub ground: usize,
}

impl Linkage {
    pub fn joint(&self, id: &str) -> Option<&Joint> {
        self.joints.iter().find(|j| j.id == id)
    }

    pub fn link_index(&self, id: &str) -> Option<usize> {
        self.links.iter().position(|l| l.id == id)
    }

    /// The link whose joint set contains all of `ids`.
    pub fn link_containing(&self, ids: &[&str]) -> Option<&Link> {
        self.links
            .iter()
            .find(|l| ids.iter().all(|i| l.joints.iter().any(|j| j == i)))
    }

    /// Generators along a chain of joint ids.
    pub fn chain_generators(&self, ids: &[String]) -> Result<Vec<DualQuaternion>> {
        ids.iter()
            .map(|id| {
                self.joint(id)
                    .map(|j| j.generator)
                    .ok_or_else(|| Error::InvalidLinkGraph(format!("unknown joint {id}")))
            })
            .collect()
    }

    /// Recomputes the link structure from the loops and checks it against
    /// the stored links: every joint lies on exactly two links, link ids are
    /// unique and the ground and tracer links exist.
    pub fn kinematics(&self) -> Result<Kinematics> {
        let mut ids = BTreeSet::new();
        for j in &self.joints {
            if !ids.insert(j.id.as_str()) {
                return Err(Error::InvalidLinkGraph(format!("duplicate joint {}", j.id)));
            }
        }
        let mut link_ids = BTreeSet::new();
        for l in &self.links {
            if l.joints.is_empty() {
                return Err(Error::InvalidLinkGraph(format!("link {} has no joints", l.id)));
            }
            if !link_ids.insert(l.id.as_str()) {
                return Err(Error::InvalidLinkGraph(format!("duplicate link {}", l.id)));
            }
        }
        let bodies = body_structure(&self.loops)?;
        for id in bodies.sides.keys() {
            if !ids.contains(id.as_str()) {
                return Err(Error::InvalidLinkGraph(format!("unknown joint {id}")));
            }
        }
        if bodies.sides.len() != self.joints.len() {
            return Err(Error::InvalidLinkGraph("some joints are not used by any loop".into()));
        }
        if bodies.joint_sets.len() != self.links.len() {
            return Err(Error::InvalidLinkGraph(format!(
                "loops define {} links but {} are listed",
                bodies.joint_sets.len(),
                self.links.len()
            )));
        }
        // match derived bodies to stored links by joint set
        let mut body_to_link = vec![usize::MAX; bodies.joint_sets.len()];
        for (b, set) in bodies.joint_sets.iter().enumerate() {
            let pos = self
                .links
                .iter()
                .position(|l| l.joints.len() == set.len() && l.joints.iter().all(|j| set.contains(j)));
            match pos {
                Some(p) if !body_to_link.contains(&p) => body_to_link[b] = p,
                _ => {
                    return Err(Error::InvalidLinkGraph(format!(
                        "no listed link matches joints {set:?}"
                    )))
                }
            }
        }
        let mut paths = vec![Vec::new(); self.links.len()];
        for (b, path) in bodies.paths.iter().enumerate() {
            paths[body_to_link[b]] = self.chain_generators(path)?;
        }
        let sides = self
            .joints
            .iter()
            .map(|j| {
                let (b, a) = bodies.sides[&j.id];
                (body_to_link[b], body_to_link[a])
            })
            .collect();
        let ground = self
            .link_index(&self.ground)
            .ok_or_else(|| Error::InvalidLinkGraph(format!("unknown ground link {}", self.ground)))?;
        if let Some(t) = &self.tracer {
            if self.link_index(&t.link).is_none() {
                return Err(Error::InvalidLinkGraph(format!("unknown tracer link {}", t.link)));
            }
        }
        Ok(Kinematics { paths, sides, ground })
    }

    /// Largest relative closure residual over all loops.
    pub fn closure_residual(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for lp in &self.loops {
            let a = chain_product(&self.chain_generators(&lp.left)?);
            let b = chain_product(&self.chain_generators(&lp.right)?);
            worst = worst.max(a.distance(&b) / (1.0 + a.max_abs().max(b.max_abs())));
        }
        Ok(worst)
    }

    /// Replaces the generator of a joint without rechecking closure; used
    /// to probe the sensitivity of validation.
    pub fn with_generator(&self, id: &str, h: DualQuaternion) -> Linkage {
        let mut out = self.clone();
        for j in &mut out.joints {
            if j.id == id {
                j.generator = h;
            }
        }
        out
    }
}
