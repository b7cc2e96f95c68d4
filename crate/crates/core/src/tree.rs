//! The Bruhat-Tits tree of SL_2 over K = F_q((t^-1)).
//!
//! The vertex `(l, b)` is the homothety class of the lattice spanned by the
//! columns of `[[t^l, b], [0, 1]]`, where `b` is taken modulo `t^l O` and so
//! keeps only its terms of degree `> l`. The vertex `x_* = (0, 0)` is the
//! class of `O^2`, `(n, 0)` is `Lambda_n`, and the line `]inf, f[` consists
//! of the vertices `(l, f mod t^l O)`.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::algebra::{Degree, Field, Poly};
use crate::cf::{cf_expand, CfExpansion, Stop};
use crate::error::{Error, Result};
use crate::laurent::{Element, RationalFunction};

/// A vertex in canonical form; `b = coset * t^(level+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeVertex {
    level: i64,
    coset: Poly,
}

fn shifted(p: &Poly, k: i64) -> RationalFunction {
    RationalFunction::from_poly(p.clone()).mul(&RationalFunction::t_pow(p.field(), k))
}

/// The terms of `x` of degree `> level`, as `(P, level)` with `x ~ P t^(level+1)`.
fn terms_above(x: &Element, level: i64) -> Result<Poly> {
    let t = Element::Exact(RationalFunction::t_pow(x.field(), -level - 1));
    x.mul(&t).poly_part().map_err(|e| match e {
        Error::InsufficientPrecision { .. } => Error::InsufficientPrecision {
            context: format!("vertex at level {level} needs the value to floor {level}"),
            required_floor: Some(level),
        },
        e => e,
    })
}

impl TreeVertex {
    /// `x_*`, the class of `O^2`.
    pub fn root(field: &Field) -> TreeVertex {
        TreeVertex {
            level: 0,
            coset: Poly::zero(field),
        }
    }

    /// `Lambda_n = [[t^n, 0], [0, 1]]`.
    pub fn lambda(field: &Field, n: i64) -> TreeVertex {
        TreeVertex {
            level: n,
            coset: Poly::zero(field),
        }
    }

    /// The vertex `(level, b mod t^level O)`.
    pub fn new(level: i64, b: &Element) -> Result<TreeVertex> {
        Ok(TreeVertex {
            level,
            coset: terms_above(b, level)?,
        })
    }

    /// The vertex at `level` on the line `]inf, f[`.
    pub fn on_line(f: &Element, level: i64) -> Result<TreeVertex> {
        TreeVertex::new(level, f)
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn field(&self) -> &Field {
        self.coset.field()
    }

    /// The coset representative `b`.
    pub fn b(&self) -> RationalFunction {
        shifted(&self.coset, self.level + 1)
    }

    /// `[[t^l, b], [0, 1]]`.
    pub fn matrix(&self) -> [[RationalFunction; 2]; 2] {
        let field = self.field();
        [
            [RationalFunction::t_pow(field, self.level), self.b()],
            [RationalFunction::zero(field), RationalFunction::one(field)],
        ]
    }

    /// The `q + 1` neighbours: the parent `(l+1, .)` first, then the
    /// children `(l-1, b + c t^l)` in field order.
    pub fn neighbors(&self) -> Vec<TreeVertex> {
        let field = self.field().clone();
        let mut out = Vec::with_capacity(field.q() as usize + 1);
        out.push(TreeVertex {
            level: self.level + 1,
            coset: self.coset.shift_down(1),
        });
        for c in field.elements() {
            let low = Poly::constant(&field, c);
            out.push(TreeVertex {
                level: self.level - 1,
                coset: &self.coset.shift(1) + &low,
            });
        }
        out
    }

    /// DOT node id `v_<level>_<coset-hex>`.
    pub fn node_id(&self) -> String {
        let q = self.field().q();
        let digits: Vec<String> = self
            .coset
            .coeffs()
            .iter()
            .rev()
            .map(|c| format!("{:x}", c.0))
            .collect();
        let hex = if digits.is_empty() {
            "0".to_string()
        } else if q > 16 {
            digits.join(".")
        } else {
            digits.concat()
        };
        format!("v_{}_{}", self.level, hex)
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.b())
    }
}

impl Serialize for TreeVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TreeVertex", 3)?;
        st.serialize_field("id", &self.node_id())?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("b", &self.b().to_string())?;
        st.end()
    }
}

/// A point of the boundary `K u {inf}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryPoint {
    Finite(Element),
    Infinity,
}

impl From<Element> for BoundaryPoint {
    fn from(x: Element) -> Self {
        BoundaryPoint::Finite(x)
    }
}

impl From<RationalFunction> for BoundaryPoint {
    fn from(x: RationalFunction) -> Self {
        BoundaryPoint::Finite(Element::Exact(x))
    }
}

/// Canonical vertex of the class of `g` (columns are the lattice basis).
pub fn vertex_from_matrix(g: &[[Element; 2]; 2]) -> Result<TreeVertex> {
    let [[a, b], [c, d]] = g.clone();
    let det = a.mul(&d).sub(&b.mul(&c));
    if det.is_zero() {
        return Err(Error::Domain("singular lattice basis".into()));
    }
    let swap = !c.is_zero() && c.deg()? > d.deg()?;
    let (a, b, c, d) = if swap { (b, a, d, c) } else { (a, b, c, d) };
    let a = if c.is_zero() {
        a
    } else {
        a.sub(&c.div(&d)?.mul(&b))
    };
    let x = a.div(&d)?;
    let level = x.deg()?.finite().ok_or_else(|| Error::InsufficientPrecision {
        context: "lattice basis is degenerate to the available precision".into(),
        required_floor: None,
    })?;
    TreeVertex::new(level, &b.div(&d)?)
}

/// An exact matrix over `F_q[t]`.
pub type PolyMatrix = [[Poly; 2]; 2];

fn exact(p: &Poly) -> Element {
    Element::Exact(RationalFunction::from_poly(p.clone()))
}

/// `gamma . v` for `gamma` with polynomial entries.
pub fn act(gamma: &PolyMatrix, v: &TreeVertex) -> TreeVertex {
    let m = v.matrix();
    let e = |i: usize, j: usize| {
        Element::Exact(m[0][j].mul_poly(&gamma[i][0]).add(&m[1][j].mul_poly(&gamma[i][1])))
    };
    vertex_from_matrix(&[[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]).expect("exact nonsingular")
}

/// The homography `z -> (a z + b)/(c z + d)` on the boundary.
pub fn homography(gamma: &PolyMatrix, z: &BoundaryPoint) -> Result<BoundaryPoint> {
    let [[a, b], [c, d]] = gamma;
    match z {
        BoundaryPoint::Infinity => {
            if c.is_zero() {
                Ok(BoundaryPoint::Infinity)
            } else {
                Ok(BoundaryPoint::Finite(Element::Exact(RationalFunction::new(
                    a.clone(),
                    c.clone(),
                )?)))
            }
        }
        BoundaryPoint::Finite(x) => {
            let den = x.mul_poly(c).add(&exact(d));
            if den.is_zero() {
                return Ok(BoundaryPoint::Infinity);
            }
            Ok(BoundaryPoint::Finite(x.mul_poly(a).add(&exact(b)).div(&den)?))
        }
    }
}

fn laurent_deg(u: &TreeVertex, v: &TreeVertex) -> Degree {
    let s = u.level.min(v.level) + 1;
    let x = &v.coset.shift((v.level + 1 - s) as usize) - &u.coset.shift((u.level + 1 - s) as usize);
    match x.deg() {
        Degree::Finite(d) => Degree::Finite(d + s),
        d => d,
    }
}

/// Combinatorial distance, from the elementary divisors of `g_u^-1 g_v`:
/// `2 * max entry degree - deg det`.
pub fn tree_distance(u: &TreeVertex, v: &TreeVertex) -> u64 {
    // g_u^-1 g_v = [[t^(lv-lu), (b_v - b_u) t^(-lu)], [0, 1]].
    let mut top = (v.level - u.level).max(0);
    if let Degree::Finite(d) = laurent_deg(u, v) {
        top = top.max(d - u.level);
    }
    (2 * top - (v.level - u.level)) as u64
}

/// `N + 1` vertices of the ray from `from` toward `f`.
pub fn geodesic_ray(f: &BoundaryPoint, from: &TreeVertex, n: usize) -> Result<Vec<TreeVertex>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = from.clone();
    out.push(v.clone());
    let x = match f {
        BoundaryPoint::Infinity => {
            while out.len() <= n {
                v = v.neighbors().swap_remove(0);
                out.push(v.clone());
            }
            return Ok(out);
        }
        BoundaryPoint::Finite(x) => x,
    };
    // Climb until the vertex lies on ]inf, f[, then descend along it.
    while out.len() <= n && TreeVertex::on_line(x, v.level)? != v {
        v = v.neighbors().swap_remove(0);
        out.push(v.clone());
    }
    if TreeVertex::on_line(x, v.level)? != v {
        return Ok(out);
    }
    let mut level = v.level;
    while out.len() <= n {
        level -= 1;
        out.push(TreeVertex::on_line(x, level)?);
    }
    Ok(out)
}

/// `beta_omega(x, y) = lim d(y, r) - d(x, r)` as `r -> omega`.
pub fn busemann(x: &TreeVertex, y: &TreeVertex, omega: &BoundaryPoint) -> Result<i64> {
    let r = match omega {
        BoundaryPoint::Infinity => {
            let top = [x, y]
                .iter()
                .map(|v| match v.b().deg() {
                    Degree::Finite(d) => d.max(v.level),
                    Degree::NegInf => v.level,
                })
                .max()
                .unwrap();
            TreeVertex::lambda(x.field(), top + 1)
        }
        // Both rays have merged into ]inf, f[ below their starting levels.
        BoundaryPoint::Finite(f) => TreeVertex::on_line(f, x.level.min(y.level) - 1)?,
    };
    Ok(tree_distance(y, &r) as i64 - tree_distance(x, &r) as i64)
}

/// A Ford sphere: the horosphere `gamma H_inf` with `gamma(inf)` its base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FordSphere {
    Infinity,
    At(RationalFunction),
}

impl FordSphere {
    pub fn new(p: &Poly, q: &Poly) -> Result<FordSphere> {
        if q.is_zero() {
            return Ok(FordSphere::Infinity);
        }
        if !p.gcd(q).is_one() {
            return Err(Error::PreconditionFailed(format!("gcd({p}, {q}) != 1")));
        }
        Ok(FordSphere::At(RationalFunction::new(p.clone(), q.clone())?))
    }

    pub fn base(&self) -> BoundaryPoint {
        match self {
            FordSphere::Infinity => BoundaryPoint::Infinity,
            FordSphere::At(r) => r.clone().into(),
        }
    }

    /// `gamma` in SL_2(F_q[t]) with `gamma(inf)` the base.
    pub fn gamma(&self, field: &Field) -> PolyMatrix {
        match self {
            FordSphere::Infinity => [
                [Poly::one(field), Poly::zero(field)],
                [Poly::zero(field), Poly::one(field)],
            ],
            FordSphere::At(r) => {
                let (p, q) = (r.num(), r.den());
                let (_, s, u) = p.ext_gcd(q);
                [[p.clone(), -&u], [q.clone(), s]]
            }
        }
    }

    pub fn gamma_inv(&self, field: &Field) -> PolyMatrix {
        let [[a, b], [c, d]] = self.gamma(field);
        [[d, -&b], [-&c, a]]
    }

    /// The point `gamma x_*` of the horosphere.
    pub fn anchor(&self, field: &Field) -> TreeVertex {
        act(&self.gamma(field), &TreeVertex::root(field))
    }

    /// Level of `gamma^-1 v`; the horoball is where it is `>= 0`.
    pub fn height(&self, v: &TreeVertex) -> i64 {
        act(&self.gamma_inv(v.field()), v).level
    }

    /// Horoball membership as `beta_base(gamma x_*, v) <= 0`.
    pub fn contains(&self, v: &TreeVertex) -> bool {
        busemann(&self.anchor(v.field()), v, &self.base()).expect("exact base") <= 0
    }
}

impl fmt::Display for FordSphere {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FordSphere::Infinity => write!(f, "inf"),
            FordSphere::At(r) if r.is_poly() => write!(f, "({r})/(1)"),
            FordSphere::At(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for FordSphere {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A Ford ball met by `]inf, f[`; indices count edges below `x_*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FordCrossing {
    pub sphere: FordSphere,
    pub entry_index: usize,
    /// `None` when the geodesic stays inside (the base is `f` itself).
    pub exit_index: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FordCrossings {
    pub balls: Vec<FordCrossing>,
    /// Scanned vertex indices that no ball contains.
    pub uncovered: Vec<usize>,
}

fn convergent_spheres(cf: &CfExpansion, n: usize) -> Vec<FordSphere> {
    (0..=n)
        .map(|k| {
            FordSphere::new(cf.p(k as i64), cf.q(k as i64)).expect("convergents are reduced")
        })
        .collect()
}

/// Scans `]inf, f[` from `x_*` down to `level_lo`, recording which of the
/// candidate balls contain each vertex.
fn scan(f: &Element, spheres: &[FordSphere], level_lo: i64, last_is_final: bool) -> Result<FordCrossings> {
    let n = (-level_lo) as usize;
    let mut seen: Vec<Option<(usize, usize)>> = vec![None; spheres.len()];
    let mut uncovered = Vec::new();
    for i in 0..=n {
        let v = TreeVertex::on_line(f, -(i as i64))?;
        let mut hit = false;
        for (k, s) in spheres.iter().enumerate() {
            if s.contains(&v) {
                hit = true;
                let e = seen[k].get_or_insert((i, i));
                e.1 = i;
            }
        }
        if !hit {
            uncovered.push(i);
        }
    }
    let mut balls: Vec<FordCrossing> = seen
        .into_iter()
        .zip(spheres)
        .enumerate()
        .filter_map(|(k, (s, sphere))| {
            s.map(|(entry, exit)| FordCrossing {
                sphere: sphere.clone(),
                entry_index: entry,
                exit_index: if last_is_final && k + 1 == spheres.len() && exit == n {
                    None
                } else {
                    Some(exit)
                },
            })
        })
        .collect();
    balls.sort_by_key(|b| (b.entry_index, b.exit_index.unwrap_or(usize::MAX)));
    Ok(FordCrossings { balls, uncovered })
}

/// Ford balls crossed by `]inf, f[` for `f` in the open unit ball, found by
/// testing every geodesic vertex against the horoballs based at the first
/// `depth + 1` convergents, down to the level where the last of them is left.
pub fn ford_crossings(f: &Element, depth: usize) -> Result<FordCrossings> {
    let cf = cf_expand(f, depth)?;
    if let Stop::Precision { required_floor } = cf.stop() {
        if cf.len() < depth {
            return Err(Error::InsufficientPrecision {
                context: format!("only {} of {depth} partial quotients are certified", cf.len()),
                required_floor: Some(*required_floor),
            });
        }
    }
    let n = cf.len().min(depth);
    let spheres = convergent_spheres(&cf, n);
    let final_ball = cf.terminated() && n == cf.len();
    let lo = if final_ball {
        -2 * cf.q(n as i64).degree() as i64 - 2
    } else {
        // Ball n is entered at -2 deg Q_n; stop one step later.
        -2 * cf.q(n as i64).degree() as i64 - 1
    };
    let mut out = scan(f, &spheres, lo, final_ball)?;
    if !final_ball {
        // The last candidate was only entered, not crossed.
        out.balls.retain(|b| b.sphere != spheres[n]);
    }
    Ok(out)
}

/// Position of `]inf, f[` relative to the horoball at `P/Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Incidence {
    Intersects,
    Tangent,
    Disjoint,
}

/// Classifies by the largest height of a geodesic vertex over the
/// horoball at `P/Q`: positive, zero or negative.
pub fn diophantine_trichotomy(f: &Element, p: &Poly, q: &Poly) -> Result<Incidence> {
    if q.is_zero() {
        return Err(Error::PreconditionFailed("Q must be nonzero".into()));
    }
    let sphere = FordSphere::new(p, q)?;
    let dq = q.degree() as i64;
    let top = |d: Degree| d.finite().unwrap_or(0);
    let hi = top(f.deg()?).max(top(p.deg() - dq)).max(0) + 1;
    let lo = -2 * dq - 1;
    let mut best = i64::MIN;
    for level in (lo..=hi).rev() {
        best = best.max(sphere.height(&TreeVertex::on_line(f, level)?));
    }
    Ok(match best.cmp(&0) {
        std::cmp::Ordering::Greater => Incidence::Intersects,
        std::cmp::Ordering::Equal => Incidence::Tangent,
        std::cmp::Ordering::Less => Incidence::Disjoint,
    })
}

/// `log_q` of the Hamenstaedt distance `d_{omega,H}(u, v)` for the Ford
/// sphere `H` based at `omega`; `NegInf` when `u = v`.
pub fn hamenstadt_distance(u: &BoundaryPoint, v: &BoundaryPoint, base: &FordSphere) -> Result<Degree> {
    let omega = base.base();
    if *u == omega || *v == omega {
        return Err(Error::PreconditionFailed("points must differ from the base".into()));
    }
    let field = match (u, v) {
        (BoundaryPoint::Finite(x), _) | (_, BoundaryPoint::Finite(x)) => x.field().clone(),
        _ => return Err(Error::PreconditionFailed("points must differ from the base".into())),
    };
    let gi = base.gamma_inv(&field);
    let (x, y) = match (homography(&gi, u)?, homography(&gi, v)?) {
        (BoundaryPoint::Finite(x), BoundaryPoint::Finite(y)) => (x, y),
        _ => return Err(Error::PreconditionFailed("points must differ from the base".into())),
    };
    if x.sub(&y).is_zero() {
        return Ok(Degree::NegInf);
    }
    // In the frame where the base is inf, the centre of the tripod is where
    // the two vertical lines meet.
    let top = |e: &Element| e.deg().map(|d| d.finite().unwrap_or(0));
    let mut level = top(&x)?.max(top(&y)?).max(0) + 1;
    while TreeVertex::on_line(&x, level - 1)? == TreeVertex::on_line(&y, level - 1)? {
        level -= 1;
    }
    let centre = act(&base.gamma(&field), &TreeVertex::on_line(&x, level)?);
    Ok(Degree::Finite(busemann(&centre, &base.anchor(&field), &omega)?))
}

/// The ball of radius `depth` around `x_*` in breadth-first order, with the
/// tree edges joining it.
pub fn ball(field: &Field, depth: usize) -> (Vec<TreeVertex>, Vec<(usize, usize)>) {
    let root = TreeVertex::root(field);
    let mut verts = vec![root.clone()];
    let mut edges = Vec::new();
    let mut dist = vec![0usize];
    let mut seen: HashSet<TreeVertex> = HashSet::from([root]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if dist[i] == depth {
            continue;
        }
        for w in verts[i].neighbors() {
            if seen.insert(w.clone()) {
                verts.push(w);
                dist.push(dist[i] + 1);
                edges.push((i, verts.len() - 1));
                queue.push_back(verts.len() - 1);
            }
        }
    }
    (verts, edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    Dot,
    Json,
}

/// The ball of radius `depth` around `x_*` with the geodesic `]inf, f[`
/// marked and Ford-ball membership of its vertices.
pub fn export_tree(f: &Element, depth: usize, format: TreeFormat) -> Result<String> {
    let field = f.field().clone();
    let (verts, edges) = ball(&field, depth);
    let lo = -(depth as i64);
    let geodesic: HashSet<TreeVertex> = (lo..=depth as i64)
        .map(|l| TreeVertex::on_line(f, l))
        .collect::<Result<_>>()?;
    let cf = cf_expand(f, depth + 1)?;
    let spheres = convergent_spheres(&cf, cf.len());
    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, s) in spheres.iter().enumerate() {
        for (i, v) in verts.iter().enumerate() {
            if geodesic.contains(v) && v.level <= 0 && s.contains(v) {
                clusters.entry(k).or_default().push(i);
            }
        }
    }
    let on_geo = |i: usize| geodesic.contains(&verts[i]);
    match format {
        TreeFormat::Dot => {
            let mut s = String::from("graph bruhat_tits {\n");
            s += &format!("  // q = {}, radius {depth}, f = {f}\n", field.q());
            for v in &verts {
                let style = if geodesic.contains(v) { ", style=bold" } else { "" };
                s += &format!("  \"{}\" [label=\"{}\"{style}];\n", v.node_id(), v);
            }
            for &(a, b) in &edges {
                let style = if on_geo(a) && on_geo(b) { " [style=bold]" } else { "" };
                s += &format!("  \"{}\" -- \"{}\"{style};\n", verts[a].node_id(), verts[b].node_id());
            }
            for (k, members) in &clusters {
                let ids: Vec<String> = members.iter().map(|&i| verts[i].node_id()).collect();
                s += &format!("  // cluster_{k}: base {} : {}\n", spheres[*k], ids.join(" "));
            }
            s += "}\n";
            Ok(s)
        }
        TreeFormat::Json => {
            let mut ford: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
            for (k, members) in &clusters {
                for &i in members {
                    ford[i].push(*k);
                }
            }
            let vertices: Vec<_> = verts
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    serde_json::json!({
                        "id": v.node_id(),
                        "level": v.level,
                        "b": v.b().to_string(),
                        "on_geodesic": on_geo(i),
                        "ford": ford[i],
                    })
                })
                .collect();
            let edges: Vec<_> = edges
                .iter()
                .map(|&(a, b)| {
                    serde_json::json!({
                        "from": verts[a].node_id(),
                        "to": verts[b].node_id(),
                        "geodesic": on_geo(a) && on_geo(b),
                    })
                })
                .collect();
            let balls: Vec<_> = clusters
                .keys()
                .map(|&k| serde_json::json!({"k": k, "base": spheres[k].to_string()}))
                .collect();
            let doc = serde_json::json!({
                "schema": 1,
                "q": field.q(),
                "radius": depth,
                "f": f.to_string(),
                "vertices": vertices,
                "edges": edges,
                "ford_balls": balls,
            });
            Ok(serde_json::to_string_pretty(&doc).expect("json") + "\n")
        }
    }
}
