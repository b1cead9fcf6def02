use std::io::{self, Write};

use divgap::explore::{CounterexampleReport, ScanReport};
use divgap::json::SCHEMA_VERSION;
use divgap::{CounterexampleFamily, FamilyKind, Instance, IntPolynomial, SetSpec, Verdict, VerdictKind, WitnessCertificate};
use serde_json::{json, Value};

use crate::config::OutputFormat;

#[allow(clippy::large_enum_variant)]
pub(crate) enum Document {
    Classification {
        instance: Instance,
        verdict: Verdict,
    },
    /// Shared by `witness` and `sarkozy`.
    Witness {
        command: &'static str,
        set: SetSpec,
        faults: Vec<String>,
        certificate: WitnessCertificate,
    },
    Refutation(CounterexampleReport),
    Scan {
        f: IntPolynomial,
        g: IntPolynomial,
        set: SetSpec,
        report: ScanReport,
    },
    Chen {
        set: SetSpec,
        report: ScanReport,
    },
}

pub(crate) struct Emitter<'a> {
    format: OutputFormat,
    out: &'a mut dyn Write,
    wrote: bool,
    status: io::Result<()>,
}

impl<'a> Emitter<'a> {
    pub fn new(format: OutputFormat, out: &'a mut dyn Write) -> Self {
        Self {
            format,
            out,
            wrote: false,
            status: Ok(()),
        }
    }

    pub fn emit(&mut self, doc: Document) {
        let r = match self.format {
            OutputFormat::Json => write_json(self.out, &to_json(&doc)),
            OutputFormat::Csv => write_csv(self.out, &doc),
            OutputFormat::Text => write_text(self.out, &doc),
        };
        self.wrote = true;
        self.record(r);
    }

    /// JSON consumers get an error document; other formats rely on stderr.
    pub fn error(&mut self, code: i32, message: &str) {
        if self.format == OutputFormat::Json && !self.wrote {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "kind": "error",
                "exit_code": code,
                "message": message,
            });
            let r = write_json(self.out, &doc);
            self.record(r);
        }
    }

    pub fn finish(mut self) -> io::Result<()> {
        let r = self.out.flush();
        self.record(r);
        self.status
    }

    fn record(&mut self, r: io::Result<()>) {
        if self.status.is_ok() {
            self.status = r;
        }
    }
}

fn to_json(doc: &Document) -> Value {
    let body = match doc {
        Document::Classification { instance, verdict } => json!({
            "kind": "classification",
            "instance": instance,
            "verdict": verdict,
        }),
        Document::Witness {
            command,
            set,
            faults,
            certificate,
        } => json!({
            "kind": command,
            "set": set,
            "verified": faults.is_empty(),
            "faults": faults,
            "certificate": certificate,
        }),
        Document::Refutation(report) => json!({
            "kind": "refutation",
            "report": report,
        }),
        Document::Scan { f, g, set, report } => json!({
            "kind": "scan",
            "f": f,
            "g": g,
            "set": set,
            "report": report,
        }),
        Document::Chen { set, report } => json!({
            "kind": "chen",
            "set": set,
            "report": report,
        }),
    };
    let mut doc = json!({ "schema_version": SCHEMA_VERSION });
    doc.as_object_mut()
        .unwrap()
        .extend(body.as_object().unwrap().clone());
    doc
}

fn write_json(out: &mut dyn Write, doc: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)
}

fn family_name(kind: &FamilyKind) -> &'static str {
    match kind {
        FamilyKind::IdenticallyZeroDifference => "IdenticallyZeroDifference",
        FamilyKind::BothConstantNonzero => "BothConstantNonzero",
        FamilyKind::MultiplesOfE { .. } => "MultiplesOfE",
        FamilyKind::MultiplesOfB { .. } => "MultiplesOfB",
        FamilyKind::PowersOfP0 { .. } => "PowersOfP0",
        FamilyKind::PowersOfB1E1 { .. } => "PowersOfB1E1",
    }
}

fn family_detail(kind: &FamilyKind) -> String {
    match kind {
        FamilyKind::MultiplesOfE { modulus } | FamilyKind::MultiplesOfB { modulus } => format!(" (modulus {modulus})"),
        FamilyKind::PowersOfP0 { p0, g } => format!(" (p0 = {p0}, g = {g})"),
        FamilyKind::PowersOfB1E1 { b1, e1 } => format!(" (b1 = {b1}, e1 = {e1})"),
        _ => String::new(),
    }
}

fn instance_fields(i: &Instance) -> [String; 4] {
    [i.b.to_string(), i.c.to_string(), i.e.to_string(), i.f.to_string()]
}

fn write_csv(out: &mut dyn Write, doc: &Document) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    match doc {
        Document::Classification { instance, verdict } => {
            w.write_record(["b", "c", "e", "f", "kind", "case", "side", "family", "set", "bound", "note"])?;
            let mut row: Vec<String> = instance_fields(instance).into();
            match &verdict.kind {
                VerdictKind::UnboundedForAll { case } => {
                    let side = if case.side == divgap::Side::Left { "left" } else { "right" };
                    row.extend(["unbounded_for_all".into(), format!("{:?}", case.case), side.into()]);
                    row.extend([String::new(), String::new(), String::new()]);
                }
                VerdictKind::NotForAll { family } => {
                    row.extend(["not_for_all".into(), String::new(), String::new()]);
                    row.extend(family_cells(family));
                }
            }
            row.push(verdict.note.clone().unwrap_or_default());
            w.write_record(&row)?;
        }
        Document::Witness {
            faults, certificate: c, ..
        } => {
            w.write_record([
                "b", "c", "e", "f", "case", "n", "lhs_value", "rhs_value", "lhs_count", "rhs_count", "difference",
                "target", "verified",
            ])?;
            let mut row: Vec<String> = instance_fields(&c.instance).into();
            row.extend([
                c.case.to_string(),
                c.n.to_string(),
                c.lhs_value.to_string(),
                c.rhs_value.to_string(),
                c.lhs_count.to_string(),
                c.rhs_count.to_string(),
                c.difference.to_string(),
                c.target.to_string(),
                faults.is_empty().to_string(),
            ]);
            w.write_record(&row)?;
        }
        Document::Refutation(r) => {
            w.write_record([
                "b", "c", "e", "f", "family", "set", "bound", "n_max", "max_difference", "argmax", "within_bound",
            ])?;
            let mut row: Vec<String> = instance_fields(&r.instance).into();
            row.extend(family_cells(&r.family));
            row.extend([
                r.scan.n_max.to_string(),
                r.scan.max_difference.to_string(),
                r.scan.argmax.to_string(),
                r.within_bound.to_string(),
            ]);
            w.write_record(&row)?;
        }
        Document::Scan { report, .. } | Document::Chen { report, .. } => {
            w.write_record(["n", "diff"])?;
            for p in report.series.iter().flatten() {
                w.write_record([p.n.to_string(), p.diff.to_string()])?;
            }
        }
    }
    w.flush()
}

fn family_cells(family: &CounterexampleFamily) -> [String; 3] {
    [
        family_name(&family.kind).into(),
        family.set.to_string(),
        family.bound.to_string(),
    ]
}

fn write_text(out: &mut dyn Write, doc: &Document) -> io::Result<()> {
    match doc {
        Document::Classification { instance, verdict } => {
            match &verdict.kind {
                VerdictKind::UnboundedForAll { case } => {
                    writeln!(out, "{instance}: unbounded for every infinite A (case {case})")?;
                }
                VerdictKind::NotForAll { family } => {
                    writeln!(
                        out,
                        "{instance}: not unbounded for every A; counterexample {}{} on {} with gap <= {}",
                        family_name(&family.kind),
                        family_detail(&family.kind),
                        family.set,
                        family.bound
                    )?;
                }
            }
            if let Some(note) = &verdict.note {
                writeln!(out, "note: {note}")?;
            }
        }
        Document::Witness {
            set,
            faults,
            certificate: c,
            ..
        } => {
            writeln!(out, "instance {} over {set}, case {}", c.instance, c.case)?;
            writeln!(out, "n = {}", c.n)?;
            writeln!(out, "bn + c = {} with d = {}", c.lhs_value, c.lhs_count)?;
            writeln!(out, "en + f = {} with d = {}", c.rhs_value, c.rhs_count)?;
            writeln!(out, "difference {} (target {})", c.difference, c.target)?;
            if faults.is_empty() {
                writeln!(out, "verified")?;
            } else {
                for fault in faults {
                    writeln!(out, "FAILED: {fault}")?;
                }
            }
        }
        Document::Refutation(r) => {
            writeln!(
                out,
                "{}: {}{} on {}, proved gap <= {}",
                r.instance,
                family_name(&r.family.kind),
                family_detail(&r.family.kind),
                r.family.set,
                r.bound
            )?;
            write_scan_summary(out, &r.scan)?;
            writeln!(out, "{}", if r.within_bound { "within bound" } else { "BOUND VIOLATED" })?;
        }
        Document::Scan { f, g, set, report } => {
            writeln!(out, "F(n) = {f}, G(n) = {g} over {set}")?;
            write_scan_summary(out, report)?;
        }
        Document::Chen { set, report } => {
            writeln!(out, "min pairwise gap among n+1, n+2, n+3 over {set}")?;
            write_scan_summary(out, report)?;
        }
    }
    Ok(())
}

fn write_scan_summary(out: &mut dyn Write, r: &ScanReport) -> io::Result<()> {
    writeln!(out, "n <= {}: max {} at n = {}", r.n_max, r.max_difference, r.argmax)?;
    if !r.zero_value_ns.is_empty() {
        writeln!(out, "skipped zero values at n = {:?}", r.zero_value_ns)?;
    }
    for p in r.series.iter().flatten() {
        writeln!(out, "{}\t{}", p.n, p.diff)?;
    }
    Ok(())
}
