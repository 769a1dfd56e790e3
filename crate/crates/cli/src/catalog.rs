//! Named built-in structures, as `.cqh` documents.

use std::sync::Arc;

use cqh_core::comodule::ComoduleAlgebra;
use cqh_core::coquasi::{opposite_variants, CoquasiHopf};
use cqh_core::cqhfile::CqhDocument;
use cqh_core::exactlin::Field;
use cqh_core::fixtures::{cayley_fixture, cq_dual, cq_z2, h4_twisted, hopf_z2, mat_z2, notsg, self_z2};
use cqh_core::twist::GaugeTwist;
use cqh_core::Error;

/// What an example needs to be rebuilt from its file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Host,
    Algebra { host: &'static str },
    Twist { host: &'static str },
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub role: Role,
    pub doc: CqhDocument,
}

fn host(name: &'static str, h: &CoquasiHopf) -> Example {
    Example { name, role: Role::Host, doc: CqhDocument::from_coquasi_hopf(h) }
}

fn algebra(name: &'static str, host: &'static str, a: &ComoduleAlgebra) -> Example {
    Example { name, role: Role::Algebra { host }, doc: CqhDocument::from_algebra(a) }
}

fn twist(name: &'static str, host_name: &'static str, t: &GaugeTwist, h: &CoquasiHopf) -> Example {
    Example { name, role: Role::Twist { host: host_name }, doc: CqhDocument::from_twist(t, h) }
}

fn with_host(out: &mut Vec<Example>, prefix: (&'static str, &'static str), a: &Arc<ComoduleAlgebra>) {
    out.push(host(prefix.0, a.host()));
    out.push(algebra(prefix.1, prefix.0, a));
}

pub fn catalog(field: Field) -> Result<Vec<Example>, Error> {
    let mut out = vec![host("hopf_z2", &hopf_z2(field)), host("cq_z2", &cq_z2(field))];
    let variants = opposite_variants(&cq_z2(field))?;
    out.push(host("cq_z2_op", &variants.op));
    out.push(host("cq_z2_cop", &variants.cop));
    out.push(host("cq_z2_opcop", &variants.op_cop));
    with_host(&mut out, ("self_h", "self_a"), &self_z2(field));
    with_host(&mut out, ("mat_h", "mat_a"), &mat_z2(field));
    with_host(&mut out, ("notsg_h", "notsg_a"), &notsg(field));
    with_host(&mut out, ("cq_dual_h", "cq_dual_a"), &cq_dual(field));
    for (n, names) in [(1, ["cplx_g", "cplx_twist", "cplx_h", "cplx_a"]), (2, ["quat_g", "quat_twist", "quat_h", "quat_a"]), (3, ["oct_g", "oct_twist", "oct_h", "oct_a"])] {
        let fx = cayley_fixture(n, field)?;
        out.push(host(names[0], &fx.host));
        out.push(twist(names[1], names[0], &fx.twist, &fx.host));
        out.push(host(names[2], &fx.twisted_host));
        out.push(algebra(names[3], names[2], &fx.twisted_algebra));
    }
    let h4 = h4_twisted(field)?;
    out.push(host("h4", &h4.host));
    out.push(twist("h4_twist", "h4", &h4.twist, &h4.host));
    out.push(host("h4t_h", &h4.twisted_host));
    out.push(algebra("h4t_a", "h4t_h", &h4.twisted_algebra));
    Ok(out)
}

pub fn find<'a>(examples: &'a [Example], name: &str) -> Option<&'a Example> {
    examples.iter().find(|e| e.name == name)
}
