//! The subcommands. Each produces a [`Report`]: a JSON document and a plain
//! text rendering of the same content. Both are deterministic.

use std::fmt::Write as _;

use clap::ValueEnum;
use itertools::Itertools;
use matro_core::bergman::{
    bergman_membership, euler_characteristic, BergmanComplex, BuildingChoice, FVector, NestedSet,
    SetPartition,
};
use matro_core::lattice::FlatsLattice;
use matro_core::{Matroid, SubsetMask, WeightVector};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::spec::MatroidSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BergmanMode {
    Facets,
    Faces,
    Fvector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NestedMode {
    Facets,
    Fvector,
    Triangulation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Building {
    Min,
    Max,
}

impl Building {
    fn choice(self) -> BuildingChoice {
        match self {
            Building::Min => BuildingChoice::Minimal,
            Building::Max => BuildingChoice::Maximal,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

/// A loaded spec with its matroid, plus the requested worker count.
pub struct Input {
    pub spec: MatroidSpec,
    pub matroid: Matroid,
    pub threads: Option<usize>,
}

impl Input {
    pub fn new(spec: MatroidSpec, threads: Option<usize>) -> Result<Self, CliError> {
        let matroid = spec.build()?;
        Ok(Input {
            spec,
            matroid,
            threads,
        })
    }

    fn complex(&self) -> Result<BergmanComplex, CliError> {
        let b = BergmanComplex::new(&self.matroid)?;
        Ok(match self.threads {
            Some(t) => b.with_threads(t),
            None => b,
        })
    }

    fn summary(&self) -> Value {
        let m = &self.matroid;
        json!({
            "name": self.spec.name,
            "n": m.ground_size(),
            "rank": m.rank(),
            "bases": m.num_bases(),
            "connected": m.is_connected(),
            "loops": m.loops().labels(),
        })
    }

    fn headline(&self) -> String {
        let m = &self.matroid;
        format!(
            "matroid {}: n={} r={} bases={} {} loops={}",
            self.spec.name,
            m.ground_size(),
            m.rank(),
            m.num_bases(),
            if m.is_connected() { "connected" } else { "disconnected" },
            m.loops()
        )
    }

    fn report(&self, command: &str, result: Value, body: String) -> Report {
        Report {
            json: json!({ "command": command, "matroid": self.summary(), "result": result }),
            text: format!("{}\n{body}", self.headline()),
        }
    }
}

fn blocks_json(blocks: &[SubsetMask]) -> Value {
    blocks.iter().map(|b| b.labels()).collect()
}

fn partition_json(p: &SetPartition) -> Value {
    blocks_json(p.blocks())
}

fn nested_json(s: &NestedSet) -> Value {
    blocks_json(&s.masks())
}

fn nested_text(s: &NestedSet) -> String {
    s.masks().iter().join(" ")
}

fn fvector_json(fv: &FVector) -> Value {
    json!(fv.as_slice())
}

pub fn info(input: &Input) -> Result<Report, CliError> {
    let m = &input.matroid;
    let lattice = FlatsLattice::new(m);
    let profile = lattice.rank_profile();
    let components = m.connected_components().blocks;
    let mut body = format!("flats per rank: {}\n", profile.iter().join(" "));
    let mut result = json!({
        "flats_per_rank": profile,
        "components": blocks_json(&components),
    });
    if !m.has_loops() {
        let mu = lattice.mobius();
        writeln!(body, "mobius: {mu}").unwrap();
        result["mobius"] = json!(mu);
    }
    if components.len() > 1 {
        writeln!(body, "components: {}", components.iter().join(" ")).unwrap();
    }
    Ok(input.report("info", result, body))
}

pub fn bergman(input: &Input, mode: BergmanMode) -> Result<Report, CliError> {
    let b = input.complex()?;
    let (result, body) = match mode {
        BergmanMode::Facets => {
            let facets = b.facets()?;
            let mut body = format!("{} facets\n", facets.len());
            for f in &facets {
                writeln!(body, "{f}").unwrap();
            }
            let list: Vec<Value> = facets.iter().map(partition_json).collect();
            (json!({ "count": facets.len(), "facets": list }), body)
        }
        BergmanMode::Faces => {
            let faces = b.bergman_faces()?;
            let mut body = format!("{} faces\n", faces.len());
            let list: Vec<Value> = faces
                .iter()
                .map(|f| {
                    let comps = f.matroid.connected_components().blocks;
                    writeln!(
                        body,
                        "dim {} bases {}: {}",
                        f.dim,
                        f.matroid.num_bases(),
                        comps.iter().join(" ")
                    )
                    .unwrap();
                    json!({
                        "dim": f.dim,
                        "bases": f.matroid.num_bases(),
                        "components": blocks_json(&comps),
                    })
                })
                .collect();
            (json!({ "count": faces.len(), "faces": list }), body)
        }
        BergmanMode::Fvector => {
            let fv = b.bergman_f_vector()?;
            let chi = euler_characteristic(&fv);
            (
                json!({ "f_vector": fvector_json(&fv), "reduced_euler_characteristic": chi }),
                format!("f-vector {fv}\nreduced Euler characteristic {chi}\n"),
            )
        }
    };
    Ok(input.report("bergman", result, body))
}

pub fn nested(input: &Input, building: Building, mode: NestedMode) -> Result<Report, CliError> {
    let b = input.complex()?;
    let choice = building.choice();
    let (result, body) = match mode {
        NestedMode::Facets => {
            let facets = b.nested_facets(&choice)?;
            let mut body = format!("{} facets\n", facets.len());
            let mut list = Vec::with_capacity(facets.len());
            for s in &facets {
                let partition = b.facet_partition(s)?;
                writeln!(body, "{}  [{}]", nested_text(s), partition).unwrap();
                list.push(json!({ "flats": nested_json(s), "partition": partition_json(&partition) }));
            }
            (json!({ "count": facets.len(), "facets": list }), body)
        }
        NestedMode::Fvector => {
            let fv = b.nested_f_vector(&choice)?;
            let chi = euler_characteristic(&fv);
            (
                json!({ "f_vector": fvector_json(&fv), "reduced_euler_characteristic": chi }),
                format!("f-vector {fv}\nreduced Euler characteristic {chi}\n"),
            )
        }
        NestedMode::Triangulation => {
            if building != Building::Min {
                return Err(CliError::validation(
                    "UnsupportedBuilding",
                    "triangulations of Bergman facets use the minimal building set".to_string(),
                ));
            }
            let tri = b.triangulation()?;
            let subdivided = tri.iter().filter(|t| t.is_subdivided()).count();
            let mut body = format!("{} facets, {} subdivided\n", tri.len(), subdivided);
            let list: Vec<Value> = tri
                .iter()
                .map(|t| {
                    if t.is_subdivided() {
                        writeln!(body, "{}: {} simplices", t.facet, t.simplices.len()).unwrap();
                        for s in &t.simplices {
                            writeln!(body, "  {}", nested_text(s)).unwrap();
                        }
                    } else {
                        writeln!(body, "{}: not subdivided", t.facet).unwrap();
                    }
                    json!({
                        "facet": partition_json(&t.facet),
                        "subdivided": t.is_subdivided(),
                        "simplices": t.simplices.iter().map(nested_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            (
                json!({ "count": tri.len(), "subdivided": subdivided, "facets": list }),
                body,
            )
        }
    };
    Ok(input.report("nested", result, body))
}

pub fn check(input: &Input) -> Result<Report, CliError> {
    let b = input.complex()?;
    let (result, body) = match b.equality_witness() {
        None => (json!({ "verdict": "EQUAL" }), "EQUAL\n".to_string()),
        Some((f, g)) => (
            json!({ "verdict": "NOT-EQUAL", "witness": { "F": f.mask.labels(), "G": g.mask.labels() } }),
            format!(
                "NOT-EQUAL\nwitness: M[{}, {}] is disconnected\n",
                f.mask, g.mask
            ),
        ),
    };
    Ok(input.report("check", result, body))
}

pub fn member(input: &Input, weights: &str) -> Result<Report, CliError> {
    let w = WeightVector::parse_list(weights).map_err(|e| CliError::Rational(e.to_string()))?;
    let m = &input.matroid;
    let inside = bergman_membership(m, &w)?;
    let mw = m.max_weight_matroid(&w)?;
    let comps = mw.connected_components().blocks;
    let verdict = if inside { "IN" } else { "OUT" };
    let body = format!(
        "w = {w}: {verdict}\nM_w: bases={} loops={} components={}\n",
        mw.num_bases(),
        mw.loops(),
        comps.len()
    );
    let result = json!({
        "w": w.to_string(),
        "verdict": verdict,
        "face_matroid": {
            "bases": mw.num_bases(),
            "loops": mw.loops().labels(),
            "components": blocks_json(&comps),
        },
    });
    Ok(input.report("member", result, body))
}

pub fn polytope(input: &Input) -> Result<Report, CliError> {
    let lattice = FlatsLattice::new(&input.matroid);
    let p = lattice.polytope_facets()?;
    let mut body = format!(
        "dimension {}\nequation: sum x_i = {}\n{} flacet inequalities\n",
        p.dimension,
        p.rank,
        p.inequalities.len()
    );
    let ineqs: Vec<Value> = p
        .inequalities
        .iter()
        .map(|(f, rhs)| {
            let lhs = f.mask.labels().iter().map(|l| format!("x{l}")).join(" + ");
            writeln!(body, "  {lhs} <= {rhs}").unwrap();
            json!({ "flat": f.mask.labels(), "rhs": rhs })
        })
        .collect();
    writeln!(body, "nonnegativity: x_i >= 0 for i = 1..{}", p.n).unwrap();
    let result = json!({
        "dimension": p.dimension,
        "equation": { "sum": p.rank },
        "flacet_inequalities": ineqs,
        "nonnegativity": true,
    });
    Ok(input.report("polytope", result, body))
}
