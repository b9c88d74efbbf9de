//! JSON input schemas for triangulations, angle assignments, and split
//! presentations.
//!
//! Surfaces: `{"triangles": [{"id": "A", "edges": ["y","z","x"]}, ...]}`.
//!
//! 3-manifolds: `{"tetrahedra": [{"id": "Y", "vertices": ["p","q","r","s"]}],
//! "gluings": [{"name": "S", "face": ["Y","p","q","r"], "to": ["Z","a","b","c"]}]}`
//! where the two vertex lists correspond positionally and the face is the
//! one spanned by the listed vertices.
//!
//! Presentations: `{"suspensions": [{"face": "S", "left": [token...],
//! "right": [token...]}], "states": ["eps1","eps2"],
//! "prefactor": [{"var": "eps2", "half_q_coeff": -1}]}` with
//! token = `{"gen": "alpha"|"beta"|"gamma"|"a"|"b"|"c", "block": 0|1,
//! "orient": "fwd"|"bwd", "states": [1, "-eps2"]}` (corner tokens take
//! `block` and a Greek `gen`; biangle tokens take a Latin `gen`).

use serde_json::Value;

use crate::complex::{FaceGluing, FaceRef, Mfld3, SurfaceTri, Triangle};
use crate::error::TraceError;
use crate::trace2d::StateRef;
use crate::trace3d::{BiTok, CornerTok, Presentation3D, SfWord};
use crate::uvir2d::{Corner, Orient};

fn bad(msg: &str) -> TraceError {
    TraceError::InvalidPresentation(msg.to_string())
}

pub fn parse_surface(v: &Value) -> Result<SurfaceTri, TraceError> {
    let tris = v
        .get("triangles")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing triangles array"))?;
    let mut out = Vec::new();
    for t in tris {
        let id = t
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("triangle id"))?;
        let edges = t
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("triangle edges"))?;
        if edges.len() != 3 {
            return Err(bad("each triangle needs 3 edges"));
        }
        let e: Vec<String> = edges
            .iter()
            .map(|x| x.as_str().map(str::to_string))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("edge names"))?;
        out.push(Triangle {
            id: id.to_string(),
            edges: [e[0].clone(), e[1].clone(), e[2].clone()],
        });
    }
    SurfaceTri::build(out).map_err(TraceError::Complex)
}

pub fn parse_mfld3(v: &Value) -> Result<Mfld3, TraceError> {
    let tets = v
        .get("tetrahedra")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing tetrahedra"))?;
    let mut ids = Vec::new();
    let mut verts: Vec<Vec<String>> = Vec::new();
    for t in tets {
        let id = t
            .get("id")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("tet id"))?;
        let vs = t
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("tet vertices"))?;
        if vs.len() != 4 {
            return Err(bad("each tetrahedron needs 4 vertex names"));
        }
        ids.push(id.to_string());
        verts.push(
            vs.iter()
                .map(|x| x.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("vertex names"))?,
        );
    }
    let tet_index = |name: &str| ids.iter().position(|i| i == name);
    let vlocal = |tet: usize, name: &str| verts[tet].iter().position(|v| v == name);
    let gl = v
        .get("gluings")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing gluings"))?;
    let mut gluings = Vec::new();
    for (gi, g) in gl.iter().enumerate() {
        let name = g
            .get("name")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| format!("f{}", gi));
        let parse_side = |key: &str| -> Result<(usize, Vec<usize>), TraceError> {
            let arr = g
                .get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| bad("gluing side"))?;
            if arr.len() != 4 {
                return Err(bad("gluing side needs [tet, v, v, v]"));
            }
            let tet = tet_index(arr[0].as_str().ok_or_else(|| bad("tet name"))?)
                .ok_or_else(|| bad("unknown tet"))?;
            let vs: Vec<usize> = arr[1..]
                .iter()
                .map(|x| {
                    x.as_str()
                        .and_then(|s| vlocal(tet, s))
                        .ok_or_else(|| bad("unknown vertex"))
                })
                .collect::<Result<_, _>>()?;
            Ok((tet, vs))
        };
        let (ft, fv) = parse_side("face")?;
        let (tt, tv) = parse_side("to")?;
        let ff = (0..4)
            .find(|x| !fv.contains(x))
            .ok_or_else(|| bad("face vertices"))?;
        let tf = (0..4)
            .find(|x| !tv.contains(x))
            .ok_or_else(|| bad("to vertices"))?;
        let mut map = [usize::MAX; 4];
        for (a, b) in fv.iter().zip(tv.iter()) {
            map[*a] = *b;
        }
        gluings.push(FaceGluing {
            name,
            from: FaceRef { tet: ft, face: ff },
            to: FaceRef { tet: tt, face: tf },
            map,
        });
    }
    Mfld3::build(ids, gluings).map_err(TraceError::Complex)
}

fn parse_state(v: &Value, vars: &[String]) -> Result<StateRef, TraceError> {
    if let Some(n) = v.as_i64() {
        return match n {
            1 => Ok(StateRef::Fixed(1)),
            -1 => Ok(StateRef::Fixed(-1)),
            _ => Err(bad("fixed states are +-1")),
        };
    }
    let s = v.as_str().ok_or_else(|| bad("state"))?;
    if let Some(rest) = s.strip_prefix('-') {
        let i = vars
            .iter()
            .position(|v| v == rest)
            .ok_or_else(|| bad("unknown state variable"))?;
        Ok(StateRef::NegVar(i))
    } else {
        let i = vars
            .iter()
            .position(|v| v == s)
            .ok_or_else(|| bad("unknown state variable"))?;
        Ok(StateRef::Var(i))
    }
}

pub fn parse_presentation(v: &Value, m: &Mfld3) -> Result<Presentation3D, TraceError> {
    let vars: Vec<String> = v
        .get("states")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().map(str::to_string))
                .collect()
        })
        .unwrap_or_default();
    let mut words = Vec::new();
    for s in v
        .get("suspensions")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing suspensions"))?
    {
        let face = s
            .get("face")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("suspension face"))?;
        let susp = m
            .suspension_index(face)
            .ok_or_else(|| bad("unknown suspension"))?;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (key, is_left) in [("left", true), ("right", false)] {
            let Some(arr) = s.get(key).and_then(Value::as_array) else {
                continue;
            };
            for tok in arr {
                let gen = tok
                    .get("gen")
                    .and_then(Value::as_str)
                    .ok_or_else(|| bad("token gen"))?;
                let orient = match tok.get("orient").and_then(Value::as_str) {
                    Some("bwd") => Orient::Bwd,
                    _ => Orient::Fwd,
                };
                let states = tok
                    .get("states")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("token states"))?;
                if states.len() != 2 {
                    return Err(bad("token needs 2 states"));
                }
                let st = [
                    parse_state(&states[0], &vars)?,
                    parse_state(&states[1], &vars)?,
                ];
                match gen {
                    "alpha" | "beta" | "gamma" => {
                        if !is_left {
                            return Err(bad("corner tokens belong to the left word"));
                        }
                        let corner = match gen {
                            "alpha" => Corner::Alpha,
                            "beta" => Corner::Beta,
                            _ => Corner::Gamma,
                        };
                        let block = tok.get("block").and_then(Value::as_u64).unwrap_or(0) as usize;
                        left.push(CornerTok {
                            block,
                            corner,
                            orient,
                            states: st,
                        });
                    }
                    "a" | "b" | "c" => {
                        if is_left {
                            return Err(bad("biangle tokens belong to the right word"));
                        }
                        let pos = match gen {
                            "a" => 0,
                            "b" => 1,
                            _ => 2,
                        };
                        right.push(BiTok {
                            pos,
                            orient,
                            states: st,
                        });
                    }
                    _ => return Err(bad("token gen must be alpha/beta/gamma or a/b/c")),
                }
            }
        }
        words.push(SfWord { susp, left, right });
    }
    let mut prefactor = Vec::new();
    if let Some(arr) = v.get("prefactor").and_then(Value::as_array) {
        for p in arr {
            let var = p
                .get("var")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("prefactor var"))?;
            let c = p
                .get("half_q_coeff")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("prefactor coefficient"))?;
            let i = vars
                .iter()
                .position(|v| v == var)
                .ok_or_else(|| bad("unknown prefactor variable"))?;
            prefactor.push((i, c));
        }
    }
    Ok(Presentation3D {
        words,
        n_vars: vars.len(),
        prefactor,
    })
}

/// 2d presentations: `{"strands": [{"tri": "A", "corner": "alpha",
/// "states": [1, "eps1"]}], "states": ["eps1"],
/// "prefactor": [{"var": "eps1", "half_q_coeff": -1}]}`.
pub fn parse_presentation2d(v: &Value) -> Result<crate::trace2d::Presentation2D, TraceError> {
    let vars: Vec<String> = v
        .get("states")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|x| x.as_str().map(str::to_string))
                .collect()
        })
        .unwrap_or_default();
    let mut strands = Vec::new();
    // triangle ids are resolved positionally against the surface when the
    // presentation is used; here they are stored as indices
    for s in v
        .get("strands")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing strands"))?
    {
        let tri = s
            .get("tri")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("strand tri must be a triangle index"))? as usize;
        let corner = match s.get("corner").and_then(Value::as_str) {
            Some("alpha") => Corner::Alpha,
            Some("beta") => Corner::Beta,
            Some("gamma") => Corner::Gamma,
            _ => return Err(bad("strand corner must be alpha/beta/gamma")),
        };
        let states = s
            .get("states")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("strand states"))?;
        if states.len() != 2 {
            return Err(bad("strand needs 2 states"));
        }
        let orient = match s.get("orient").and_then(Value::as_str) {
            Some("bwd") => Orient::Bwd,
            _ => Orient::Fwd,
        };
        strands.push(crate::trace2d::Strand2D {
            tri,
            corner,
            orient,
            ends: [
                parse_state(&states[0], &vars)?,
                parse_state(&states[1], &vars)?,
            ],
        });
    }
    let mut prefactor = Vec::new();
    if let Some(arr) = v.get("prefactor").and_then(Value::as_array) {
        for p in arr {
            let var = p
                .get("var")
                .and_then(Value::as_str)
                .ok_or_else(|| bad("prefactor var"))?;
            let c = p
                .get("half_q_coeff")
                .and_then(Value::as_i64)
                .ok_or_else(|| bad("prefactor coefficient"))?;
            let i = vars
                .iter()
                .position(|v| v == var)
                .ok_or_else(|| bad("unknown prefactor variable"))?;
            prefactor.push((i, c));
        }
    }
    Ok(crate::trace2d::Presentation2D {
        strands,
        n_vars: vars.len(),
        prefactor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn surface_round_trip() {
        let v = json!({"triangles": [
            {"id": "A", "edges": ["y", "z", "x"]},
            {"id": "B", "edges": ["x", "v", "w"]}
        ]});
        let s = parse_surface(&v).unwrap();
        assert_eq!(s.edge_classes.len(), 5);
    }

    #[test]
    fn mfld3_parse_bipyramid() {
        let v = json!({
            "tetrahedra": [
                {"id": "U", "vertices": ["u", "p", "q", "r"]},
                {"id": "D", "vertices": ["d", "p", "r", "q"]}
            ],
            "gluings": [
                {"name": "eq", "face": ["U", "p", "q", "r"], "to": ["D", "p", "q", "r"]}
            ]
        });
        let m = parse_mfld3(&v).unwrap();
        assert_eq!(m.n_tets(), 2);
        assert_eq!(m.suspensions.len(), 1);
    }

    #[test]
    fn malformed_rejected() {
        let v = json!({"triangles": [{"id": "A", "edges": ["e", "e", "e"]}]});
        assert!(parse_surface(&v).is_err());
    }
}
