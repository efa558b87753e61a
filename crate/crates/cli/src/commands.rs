//! One function per subcommand; each returns the reports it ran and a data payload.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};
use tpa_core::action::{verify_tpa, TwistedPartialAction};
use tpa_core::crossprod::{build_crossed_product, morita_context, verify_associativity};
use tpa_core::exel::{
    build_exel_category, check_partial_hom, exel_by_closure, semigroupoid_ideals, standard_forms,
    verify_inverse_category,
};
use tpa_core::globalize::{
    build_globalization, verify_enveloping, verify_extension_data, verify_rerestriction, verify_step_identities,
    StarReading,
};
use tpa_core::groupoid::{verify_groupoid, Groupoid};
use tpa_core::ksemigroup::{
    build_semigroup_crossed_product, check_separating, embed_semigroup_cp, rep_from_theta, ring_to_semigroup,
    roundtrip_from_action, roundtrip_from_rep, semigroup_to_ring, theta_from_rep, verify_semigroup_tpa, KSemigroup,
    SemigroupTPA, SEMIGROUP_CAP,
};
use tpa_core::partrep::{
    check_domain_closure, compute_nx, enumerate_pm, monomial_representation, verify_category_factor_set,
    verify_monomial_relation, verify_partial_rep, FactorSet, SchurCaps,
};
use tpa_core::{AxiomReport, Error, FieldSpec};

use crate::input::{self, WorkspaceFile};
use crate::{CliError, Command, Common, Outcome};

const DEFAULT_MAX_ARROWS: usize = 16;

struct Session<'a> {
    file: &'a WorkspaceFile,
    field: FieldSpec,
    g: Groupoid,
    reports: Vec<AxiomReport>,
    data: Map<String, Value>,
}

impl Session<'_> {
    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.data.insert(key.to_string(), v.into());
    }

    /// Adds the report and tells whether it passed.
    fn push(&mut self, r: AxiomReport) -> bool {
        let ok = r.passed();
        self.reports.push(r);
        ok
    }

    fn done(self) -> Outcome {
        Outcome { reports: self.reports, data: self.data }
    }
}

pub fn run(cmd: &Command, file: &WorkspaceFile) -> Result<Outcome, CliError> {
    let common = common_of(cmd);
    let field = file.field()?;
    let g = file.groupoid()?;
    let default_cap =
        if matches!(cmd, Command::Schur { .. }) { SchurCaps::default().max_arrows } else { DEFAULT_MAX_ARROWS };
    let cap = common.max_arrows.unwrap_or(default_cap);
    if g.len() > cap {
        return Err(Error::Capacity(format!("{} arrows exceed the cap {cap}", g.len())).into());
    }
    let mut s = Session { file, field, g, reports: Vec::new(), data: Map::new() };
    s.put("field", field.to_string());
    s.put("arrows", s.g.len());
    let gr = verify_groupoid(&s.g);
    if !s.push(gr) {
        return Ok(s.done());
    }
    match cmd {
        Command::VerifyAction(_) => verify_action(&mut s)?,
        Command::CrossedProduct(_) => crossed_product(&mut s)?,
        Command::Globalize { star_literal, emit, extension, .. } => {
            globalize(&mut s, *star_literal, emit.as_deref(), extension.as_deref())?
        }
        Command::MoritaCheck(_) => morita(&mut s)?,
        Command::Exel(_) => exel(&mut s)?,
        Command::CocycleCheck(_) => cocycle_check(&mut s)?,
        Command::Schur { max_field, .. } => schur(&mut s, common.max_arrows.unwrap_or(default_cap), *max_field)?,
        Command::SemigroupAction { tables, .. } => semigroup_action(&mut s, *tables)?,
        Command::Roundtrip(_) => roundtrip(&mut s)?,
    }
    Ok(s.done())
}

fn common_of(cmd: &Command) -> &Common {
    match cmd {
        Command::VerifyAction(c)
        | Command::CrossedProduct(c)
        | Command::MoritaCheck(c)
        | Command::Exel(c)
        | Command::CocycleCheck(c)
        | Command::Roundtrip(c) => c,
        Command::Globalize { common, .. } | Command::Schur { common, .. } | Command::SemigroupAction { common, .. } => {
            common
        }
    }
}

/// Reads and verifies the action; `None` when the axioms fail.
fn checked_action(s: &mut Session) -> Result<Option<TwistedPartialAction>, CliError> {
    let a = input::action(s.file, s.field, &s.g)?;
    s.put("algebra_dim", a.algebra().dim());
    let dims: BTreeMap<String, usize> = s.g.arrows().map(|x| (s.g.name(x).to_string(), a.domain(x).dim())).collect();
    s.put("domain_dims", json!(dims));
    let ok = s.push(verify_tpa(&a)?);
    Ok(ok.then_some(a))
}

fn verify_action(s: &mut Session) -> Result<(), CliError> {
    checked_action(s)?;
    Ok(())
}

fn crossed_product(s: &mut Session) -> Result<(), CliError> {
    let Some(a) = checked_action(s)? else { return Ok(()) };
    let cp = build_crossed_product(&a)?;
    s.push(verify_associativity(&cp));
    let alg = cp.algebra();
    let n = alg.dim();
    let mut products = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let v = &alg.structure_constants()[i * n + j];
            if v.iter().any(|c| !c.is_zero()) {
                products.insert(format!("{}*{}", alg.labels()[i], alg.labels()[j]), input::vector_spec(alg, v));
            }
        }
    }
    s.put("dim", n);
    s.put("basis", json!(alg.labels()));
    s.put("products", json!(products));
    if let Some(u) = cp.unit() {
        s.put("unit", json!(input::vector_spec(alg, u)));
    }
    Ok(())
}

fn extension_source(s: &Session, path: Option<&Path>) -> Result<Option<WorkspaceFile>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let ext = WorkspaceFile::parse(&text)?;
    if ext.field()? != s.field {
        return Err(CliError::Input("the extension file is over a different field".into()));
    }
    Ok(Some(ext))
}

fn globalize(s: &mut Session, literal: bool, emit: Option<&Path>, extension: Option<&Path>) -> Result<(), CliError> {
    let reading = if literal { StarReading::Literal } else { StarReading::Corrected };
    s.put("reading", json!(reading));
    let ext_file = extension_source(s, extension)?;
    let Some(a) = checked_action(s)? else { return Ok(()) };
    let wt = input::extension(ext_file.as_ref().unwrap_or(s.file), &a)?;
    let ext_report = verify_extension_data(&a, &wt, reading)?;
    s.put("extension_passed", ext_report.passed());
    if !s.push(ext_report) {
        return Ok(());
    }
    let res = build_globalization(&a, &wt)?;
    s.push(verify_enveloping(&a, &res)?);
    s.push(verify_step_identities(&a, &res)?);
    s.push(verify_rerestriction(&a, &res)?);
    s.put("global_dim", res.global.algebra().dim());
    let out = input::action_to_file(&res.global);
    let text =
        toml::to_string(&out).map_err(|e| CliError::Input(format!("cannot serialize the global action: {e}")))?;
    if let Some(path) = emit {
        std::fs::write(path, &text).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    }
    s.put("global_action", json!(out));
    Ok(())
}

fn morita(s: &mut Session) -> Result<(), CliError> {
    let Some(a) = checked_action(s)? else { return Ok(()) };
    let wt = input::extension(s.file, &a)?;
    if !s.push(verify_extension_data(&a, &wt, StarReading::Corrected)?) {
        return Ok(());
    }
    let res = build_globalization(&a, &wt)?;
    let m = morita_context(&a, &res)?;
    s.put("dims", json!({ "A": m.dim_a, "B": m.dim_b, "M": m.dim_m, "N": m.dim_n, "corner": m.dim_corner }));
    s.push(m.checks);
    Ok(())
}

fn exel(s: &mut Session) -> Result<(), CliError> {
    let g = s.g.clone();
    let e = build_exel_category(&g)?;
    let sg = e.semigroupoid();
    s.push(verify_inverse_category(sg));
    s.push(check_partial_hom(&g, sg, &e.inclusion())?);
    let mut agree = AxiomReport::new("Exel category constructions");
    let mut by_closure = exel_by_closure(&g)?;
    let mut forms = standard_forms(&g)?;
    by_closure.sort();
    forms.sort();
    agree.fact(
        "closure and standard forms agree",
        by_closure == forms,
        format!("{} vs {} elements", by_closure.len(), forms.len()),
    );
    s.push(agree.finish());
    let names: Vec<&str> = sg.names().iter().map(String::as_str).collect();
    let table: Vec<Vec<Value>> = (0..sg.len())
        .map(|i| (0..sg.len()).map(|j| sg.mul(i, j).map_or(Value::Null, |k| json!(names[k]))).collect())
        .collect();
    let idempotents: Vec<&str> = (0..sg.len()).filter(|&i| sg.is_idempotent(i)).map(|i| names[i]).collect();
    let ideals: Vec<Vec<&str>> =
        semigroupoid_ideals(sg)?.iter().map(|id| id.iter().map(|&i| names[i]).collect()).collect();
    s.put("elements", json!(names));
    s.put("table", json!(table));
    s.put("idempotents", json!(idempotents));
    s.put("ideals", json!(ideals));
    Ok(())
}

/// `"x,y"` to the exact value, nonzero entries only.
fn factor_table(rho: &FactorSet) -> Value {
    let c = rho.carrier();
    let n = c.len();
    let m: BTreeMap<String, String> = (0..n * n)
        .filter(|&i| !rho.values()[i].is_zero())
        .map(|i| (format!("{},{}", c.name(i / n), c.name(i % n)), rho.values()[i].to_string()))
        .collect();
    json!(m)
}

fn cocycle_check(s: &mut Session) -> Result<(), CliError> {
    let rho = input::factor_set(s.file, s.field, &s.g)?;
    let rep = input::representation(s.file, s.field, &s.g)?;
    if rho.is_none() && rep.is_none() {
        return Err(CliError::Input("cocycle-check needs [[factor_set]] entries or a [representation] block".into()));
    }
    if let Some(rho) = rho {
        s.put("factor_set", factor_table(&rho));
        if s.push(verify_category_factor_set(&rho)?) {
            let gamma = monomial_representation(&rho)?;
            s.push(verify_monomial_relation(&rho, &gamma));
        }
    }
    if let Some(rep) = rep {
        let (base, sigma) = verify_partial_rep(&rep);
        s.put("representation_factor_set", factor_table(&sigma));
        if s.push(base) {
            s.push(check_domain_closure(&sigma)?);
            s.push(compute_nx(&rep).report);
        }
    }
    Ok(())
}

fn schur(s: &mut Session, max_arrows: usize, max_field: u64) -> Result<(), CliError> {
    let caps = SchurCaps { max_arrows, max_field, ..SchurCaps::default() };
    let pm = enumerate_pm(&s.g, s.field, caps)?;
    let comps: Vec<Value> = pm
        .components
        .iter()
        .map(|c| {
            json!({
                "zero_pairs": c.zero_pairs.iter().map(|&(x, y)| format!("{},{}", s.g.name(x), s.g.name(y))).collect::<Vec<_>>(),
                "members": c.members.len(),
                "classes": c.class_representatives.len(),
                "representatives": c.class_representatives.iter().map(factor_table).collect::<Vec<_>>(),
                "idempotent": c.idempotent.as_ref().map(factor_table),
            })
        })
        .collect();
    s.put("exel_size", pm.exel_size);
    s.put("exel_ideals", pm.exel_ideal_count);
    s.put("generated_ideals", pm.generated_ideals.len());
    s.put("members", pm.len());
    s.put("classes", pm.class_count());
    s.put("components", comps);
    s.push(pm.report);
    Ok(())
}

/// The explicit semigroup action, or the one obtained by forgetting the addition of the action.
fn semigroup_tpa(s: &mut Session) -> Result<Option<(SemigroupTPA, Option<TwistedPartialAction>)>, CliError> {
    if let Some(t) = input::semigroup_action(s.file, s.field, &s.g)? {
        s.put("source", "semigroup");
        return Ok(Some((t, None)));
    }
    s.put("source", "action");
    let Some(a) = checked_action(s)? else { return Ok(None) };
    let rs = ring_to_semigroup(&a)?;
    let back = semigroup_to_ring(&rs.tpa, &rs.algebra, &rs.vectors)?;
    let mut r = AxiomReport::new("ring and semigroup conversion");
    r.fact(
        "converting back gives the input action",
        back == a,
        format!("{} semigroup elements", rs.tpa.semigroup().len()),
    );
    s.push(r.finish());
    Ok(Some((rs.tpa, Some(a))))
}

fn semigroup_action(s: &mut Session, tables: bool) -> Result<(), CliError> {
    let Some((t, ring)) = semigroup_tpa(s)? else { return Ok(()) };
    s.put("semigroup_size", t.semigroup().len());
    if !s.push(verify_semigroup_tpa(&t)) {
        return Ok(());
    }
    let cp = build_semigroup_crossed_product(&t)?;
    s.put("crossed_product_size", cp.len());
    s.push(cp.report().clone());
    if let Some(a) = ring {
        let emb = embed_semigroup_cp(&a)?;
        s.put(
            "embedding",
            json!({
                "injective": emb.injective,
                "multiplicative": emb.multiplicative,
                "surjective": emb.surjective,
                "image_size": emb.image_size,
                "ring_size": emb.ring_size.to_string(),
                "witness": emb.witness,
            }),
        );
        s.push(emb.report);
    }
    if tables {
        s.put("semigroup", table_json(t.semigroup()));
        s.put("crossed_product", table_json(cp.semigroup()));
    }
    Ok(())
}

fn table_json(k: &KSemigroup) -> Value {
    json!(input::semigroup_block(k))
}

fn roundtrip(s: &mut Session) -> Result<(), CliError> {
    if let Some(rep) = input::representation(s.file, s.field, &s.g)? {
        s.put("source", "representation");
        let nx = compute_nx(&rep);
        if !s.push(nx.report) {
            return Ok(());
        }
        s.push(check_separating(&rep, SEMIGROUP_CAP)?);
        let ra = theta_from_rep(&rep, SEMIGROUP_CAP)?;
        s.put("semigroup_size", ra.tpa.semigroup().len());
        s.push(ra.report);
        s.push(roundtrip_from_rep(&rep, SEMIGROUP_CAP)?);
        return Ok(());
    }
    let Some((t, _)) = semigroup_tpa(s)? else { return Ok(()) };
    if !s.push(verify_semigroup_tpa(&t)) {
        return Ok(());
    }
    let tr = rep_from_theta(&t)?;
    s.push(check_separating(&tr.rep, SEMIGROUP_CAP)?);
    let ra = theta_from_rep(&tr.rep, SEMIGROUP_CAP)?;
    s.push(ra.report);
    s.push(roundtrip_from_rep(&tr.rep, SEMIGROUP_CAP)?);
    let back = roundtrip_from_action(&t)?;
    s.put("semigroup_size", t.semigroup().len());
    s.put("crossed_product_size", tr.crossed.len());
    s.put("adjusted", back.adjusted);
    s.put("phi_image_size", back.phi_image_size);
    s.push(back.report);
    Ok(())
}
