use std::fmt::Write;

use crate::setcover::Incidence;

const TERMS_PER_LINE: usize = 8;

fn write_sum(out: &mut String, vars: impl Iterator<Item = usize>) {
    for (k, g) in vars.enumerate() {
        if k > 0 {
            out.push_str(if k % TERMS_PER_LINE == 0 {
                "\n   + "
            } else {
                " + "
            });
        }
        write!(out, "x_{g}").unwrap();
    }
}

/// The covering program in CPLEX LP format: one binary per candidate, one
/// `>= 1` row per witness.
pub fn export_ip(inst: &Incidence) -> String {
    let mut out = String::from("\\ terrain guarding set cover\nMinimize\n obj: ");
    if inst.guard_count() == 0 {
        out.push('0');
    }
    write_sum(&mut out, 0..inst.guard_count());
    out.push_str("\nSubject To\n");
    for (w, row) in inst.rows().iter().enumerate() {
        write!(out, " w_{w}: ").unwrap();
        write_sum(&mut out, row.ones());
        out.push_str(" >= 1\n");
    }
    out.push_str("Binary\n");
    for g in 0..inst.guard_count() {
        writeln!(out, " x_{g}").unwrap();
    }
    out.push_str("End\n");
    out
}
