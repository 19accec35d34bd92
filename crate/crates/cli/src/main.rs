//! Command-line front end over the core library: validation, topology and
//! sheaf constructions, model comparisons, group utilities, corpus
//! management, and the invariant suite.
//!
//! Exit codes: 0 on success (boolean answers are payload, never codes),
//! 1 when the suite finds failing checks, 2 on unreadable or law-breaking
//! input, 3 when valid inputs fall outside an operation's precondition.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use toposcalc_core::checks::{run_suite, CheckReport};
use toposcalc_core::corpus::{self, Corpus};
use toposcalc_core::fincat::{
    connected_components, full_subcategory, right_ore_witness, validate_category, Category,
    ObjectId, RawCategory,
};
use toposcalc_core::gsets::{
    automorphisms, gset_as_presheaf, orbits_on_tuples, stabilizer, subgroup_conjugacy_classes,
    transitive_gsets, GroupError, PermGroup, RawGroup,
};
use toposcalc_core::modelkit::{
    back_and_forth, cardinality_sequents, eval, homogeneity_witness, satisfies_sequent,
    Assignment, Formula, ModelError, Sequent, Structure,
};
use toposcalc_core::sheafkit::{
    enumerate_atoms, is_atom, is_connected_object, restricted_canonical_topology, sheaf_witness,
    sheafify, subsheaves, terminal_decomposition, Presheaf, RawPresheaf, RawSite, SheafError,
    Site, Subpresheaf,
};
use toposcalc_core::sitecore::{
    enumerate_ideals, enumerate_sieves, induced_topology, reduce_to_dense, saturate, Sieve,
};

#[derive(Parser)]
#[command(name = "toposcalc", version, about = "Finite sites, sheaves, models, and group actions")]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap for exhaustive group enumerations.
    #[arg(long, global = true, env = "TOPOSCALC_BOUND", default_value_t = 24)]
    bound: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a category file against the composition-table laws.
    Validate { file: PathBuf },
    /// List the connected components of a category.
    Components { file: PathBuf },
    /// Test the square-completion property, printing a witness cospan on failure.
    Ore { file: PathBuf },
    /// List every sieve on an object.
    Sieves { file: PathBuf, object: String },
    /// Close the covers of a site file into the least topology containing them.
    Saturate { file: PathBuf },
    /// Equip a category with its least topology covering every nonempty sieve.
    Atomic { file: PathBuf },
    /// Drop degenerately covered objects, yielding a dense site.
    Reduce { file: PathBuf },
    /// List the object sets closed under arrows in both directions.
    Ideals { file: PathBuf },
    /// Restrict a site to the full subcategory on the given objects.
    Induced { site: PathBuf, objects: Vec<String> },
    /// Test the unique-amalgamation condition, printing the first failure.
    Sheafcheck { site: PathBuf, presheaf: PathBuf },
    /// Sheafify a presheaf; the output embeds the comparison map as "unit".
    Sheafify { site: PathBuf, presheaf: PathBuf },
    /// List the closed subpresheaves of a presheaf.
    Subsheaves { site: PathBuf, presheaf: PathBuf },
    /// Enumerate the atoms of the sheaf category, up to isomorphism.
    Atoms { site: PathBuf },
    /// Test whether a sheaf is connected.
    Connected { site: PathBuf, presheaf: PathBuf },
    /// Decompose the terminal sheaf into its minimal summands.
    Decompose { site: PathBuf },
    /// Count the summands of the terminal sheaf; category files are reduced first.
    Completions { file: PathBuf },
    /// Build the category of named atom sheaves with its jointly-dense topology.
    Canonical { site: PathBuf, atoms: Vec<PathBuf> },
    /// Evaluate a formula in a structure under an assignment.
    Eval {
        structure: PathBuf,
        formula: PathBuf,
        /// Variable binding, repeatable.
        #[arg(long = "assign", value_name = "VAR=ELEM")]
        assignments: Vec<String>,
    },
    /// Check a sequent, printing a counterexample assignment on failure.
    Sequent { structure: PathBuf, sequent: PathBuf },
    /// Emit the two sequents pinning a universe size, and test them.
    Cardseq { structure: PathBuf, size: usize },
    /// Search for an isomorphism between two structures.
    Iso { left: PathBuf, right: PathBuf },
    /// Test homogeneity, printing a non-extendable partial map on failure.
    Homog { structure: PathBuf },
    /// Compute the automorphism group of a structure.
    Aut { structure: PathBuf },
    /// List the orbits of a permutation group on k-tuples.
    Orbits { group: PathBuf, k: usize },
    /// Compute the pointwise stabilizer of a tuple.
    Stab { group: PathBuf, points: Vec<String> },
    /// Compare transitive-action atom counts against subgroup conjugacy classes.
    GsetAtoms { group: PathBuf },
    /// Run every invariant check over a corpus directory.
    Suite { dir: PathBuf },
    /// Write the built-in corpus files into a directory.
    Corpus { dir: PathBuf },
}

enum Failure {
    /// Failing suite checks: exit 1.
    Checks(usize),
    /// Unreadable or law-breaking input: exit 2.
    Malformed(String),
    /// Valid input outside an operation's precondition: exit 3.
    Precondition(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(n)) => {
            eprintln!("suite: {n} failing checks");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn sheaf_failure(e: SheafError) -> Failure {
    match e {
        SheafError::SiteNotLocallyConnected(_)
        | SheafError::NotAtomicSite(_)
        | SheafError::NotAnAtom(_)
        | SheafError::InvalidInput(_) => Failure::Precondition(e.to_string()),
        _ => Failure::Malformed(e.to_string()),
    }
}

fn group_failure(e: GroupError) -> Failure {
    match e {
        GroupError::GroupTooLarge { .. } | GroupError::EnumerationTooLarge(_) => {
            Failure::Precondition(e.to_string())
        }
        _ => Failure::Malformed(e.to_string()),
    }
}

fn model_failure(e: ModelError) -> Failure {
    match e {
        ModelError::SignatureMismatch => Failure::Precondition(e.to_string()),
        _ => Failure::Malformed(e.to_string()),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_category(path: &Path) -> Result<Category, Failure> {
    let raw: RawCategory = read_json(path)?;
    validate_category(&raw).map_err(|violations| {
        let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        Failure::Malformed(format!("{}: {}", path.display(), msgs.join("; ")))
    })
}

fn load_site(path: &Path) -> Result<Site, Failure> {
    let raw: RawSite = read_json(path)?;
    Site::from_raw(&raw).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_presheaf(cat: &Category, path: &Path) -> Result<Presheaf, Failure> {
    let raw: RawPresheaf = read_json(path)?;
    Presheaf::from_raw(cat, &raw)
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Structure, Failure> {
    let m: Structure = read_json(path)?;
    m.validate()
        .map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))?;
    Ok(m)
}

fn load_group(path: &Path) -> Result<PermGroup, Failure> {
    let raw: RawGroup = read_json(path)?;
    PermGroup::from_raw(&raw).map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

/// Prints one line, ending the process quietly if the reader hung up.
fn say(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).is_err() || out.write_all(b"\n").is_err() {
        std::process::exit(0);
    }
}

fn emit(as_json: bool, value: Value, human: String) {
    if as_json {
        say(&serde_json::to_string(&value).expect("serializable"));
    } else {
        say(&human);
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

/// Nonempty fibers of a subpresheaf as `obj:elem` tokens, `(empty)` if none.
fn subsets_line(s: &Subpresheaf) -> String {
    let tokens: Vec<String> = s
        .subsets
        .iter()
        .flat_map(|(c, xs)| xs.iter().map(move |x| format!("{c}:{x}")))
        .collect();
    if tokens.is_empty() {
        "(empty)".to_string()
    } else {
        tokens.join(" ")
    }
}

fn site_summary(site: &Site) -> String {
    let mut lines = vec![format!(
        "{} objects, {} morphisms",
        site.category.objects().len(),
        site.category.morphism_count()
    )];
    for c in site.category.objects() {
        lines.push(format!("{c}: {} covering sieves", site.topology.cover_count(c)));
    }
    lines.join("\n")
}

fn group_summary(g: &PermGroup) -> String {
    let mut lines = vec![format!("order {}", g.order())];
    for p in g.elements() {
        let row: Vec<String> = g
            .perm_as_map(p)
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        lines.push(row.join(" "));
    }
    lines.join("\n")
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let raw: RawCategory = read_json(file)?;
            match validate_category(&raw) {
                Ok(cat) => emit(
                    cli.json,
                    json!({"valid": true, "violations": []}),
                    format!(
                        "valid: {} objects, {} morphisms",
                        cat.objects().len(),
                        cat.morphism_count()
                    ),
                ),
                Err(violations) => {
                    let list: Vec<Value> = violations
                        .iter()
                        .map(|v| {
                            json!({
                                "law": v.law.to_string(),
                                "morphisms": v.morphisms,
                                "message": v.message,
                            })
                        })
                        .collect();
                    let lines: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                    emit(
                        cli.json,
                        json!({"valid": false, "violations": list}),
                        lines.join("\n"),
                    );
                }
            }
        }
        Command::Components { file } => {
            let cat = load_category(file)?;
            let comps = connected_components(&cat);
            let mut lines = vec![format!("{} components", comps.len())];
            lines.extend(comps.iter().map(|c| c.join(" ")));
            emit(cli.json, json!({"components": comps}), lines.join("\n"));
        }
        Command::Ore { file } => {
            let cat = load_category(file)?;
            match right_ore_witness(&cat) {
                None => emit(cli.json, json!({"right_ore": true, "witness": null}), "true".into()),
                Some(w) => emit(
                    cli.json,
                    json!({"right_ore": false, "witness": to_value(&w)}),
                    format!("false, witness cospan ({}; {},{})", w.target, w.left, w.right),
                ),
            }
        }
        Command::Sieves { file, object } => {
            let cat = load_category(file)?;
            let sieves =
                enumerate_sieves(&cat, object).map_err(|e| Failure::Malformed(e.to_string()))?;
            let arrow_sets: Vec<&BTreeSet<String>> = sieves.iter().map(Sieve::arrows).collect();
            let mut lines = vec![format!("{} sieves on {object}", sieves.len())];
            lines.extend(sieves.iter().map(|s| s.to_string()));
            emit(
                cli.json,
                json!({"object": object, "sieves": arrow_sets}),
                lines.join("\n"),
            );
        }
        Command::Saturate { file } => {
            let raw: RawSite = read_json(file)?;
            let cat = validate_category(&raw.category).map_err(|violations| {
                let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                Failure::Malformed(format!("{}: {}", file.display(), msgs.join("; ")))
            })?;
            let mut generators = Vec::new();
            for (object, covers) in &raw.topology.covers {
                for arrows in covers {
                    generators.push(
                        Sieve::generated(&cat, object, arrows)
                            .map_err(|e| Failure::Malformed(e.to_string()))?,
                    );
                }
            }
            let top = saturate(&cat, &generators);
            let site = Site::new(cat, top).expect("saturation satisfies the axioms");
            emit(cli.json, to_value(&site.to_raw()), site_summary(&site));
        }
        Command::Atomic { file } => {
            let cat = load_category(file)?;
            let site = Site::atomic(&cat);
            emit(cli.json, to_value(&site.to_raw()), site_summary(&site));
        }
        Command::Reduce { file } => {
            let cat = load_category(file)?;
            let (sub, top) = reduce_to_dense(&cat);
            let site = Site::new(sub, top).expect("reduction yields a valid site");
            let kept = site.category.objects().join(" ");
            let human = if kept.is_empty() {
                "kept objects: (none)".to_string()
            } else {
                format!("kept objects: {kept}")
            };
            emit(cli.json, to_value(&site.to_raw()), human);
        }
        Command::Ideals { file } => {
            let cat = load_category(file)?;
            if cat.objects().len() > 24 {
                return Err(Failure::Precondition(
                    "ideal enumeration is exponential in object count; limit is 24".into(),
                ));
            }
            let ideals = enumerate_ideals(&cat);
            let mut lines = vec![format!("{} ideals", ideals.len())];
            lines.extend(ideals.iter().map(|i| {
                let members: Vec<&str> = i.iter().map(String::as_str).collect();
                format!("{{{}}}", members.join(", "))
            }));
            emit(cli.json, json!({"ideals": ideals}), lines.join("\n"));
        }
        Command::Induced { site, objects } => {
            let ambient = load_site(site)?;
            let keep: BTreeSet<ObjectId> = objects.iter().cloned().collect();
            let sub = full_subcategory(&ambient.category, &keep)
                .map_err(|e| Failure::Malformed(e.to_string()))?;
            let top = induced_topology(&ambient.category, &ambient.topology, &sub)
                .map_err(|e| Failure::Malformed(e.to_string()))?;
            let restricted = Site::new(sub, top).expect("induced topology satisfies the axioms");
            emit(cli.json, to_value(&restricted.to_raw()), site_summary(&restricted));
        }
        Command::Sheafcheck { site, presheaf } => {
            let site = load_site(site)?;
            let f = load_presheaf(&site.category, presheaf)?;
            match sheaf_witness(&site, &f) {
                None => emit(cli.json, json!({"sheaf": true, "failure": null}), "sheaf".into()),
                Some(w) => emit(
                    cli.json,
                    json!({
                        "sheaf": false,
                        "failure": {
                            "object": w.object,
                            "sieve": w.sieve.arrows(),
                            "family": w.family,
                            "amalgamations": w.amalgamations,
                        },
                    }),
                    format!(
                        "not a sheaf: a matching family over {} has {} amalgamations",
                        w.sieve,
                        w.amalgamations.len()
                    ),
                ),
            }
        }
        Command::Sheafify { site, presheaf } => {
            let site = load_site(site)?;
            let f = load_presheaf(&site.category, presheaf)?;
            let sh = sheafify(&site, &f);
            let mut value = to_value(&sh.sheaf.to_raw(&site.category));
            value["unit"] = to_value(&sh.unit.components);
            emit(
                cli.json,
                value,
                format!(
                    "sheafified: {} elements from {}",
                    sh.sheaf.total_size(),
                    f.total_size()
                ),
            );
        }
        Command::Subsheaves { site, presheaf } => {
            let site = load_site(site)?;
            let f = load_presheaf(&site.category, presheaf)?;
            let subs = subsheaves(&site, &f).map_err(sheaf_failure)?;
            let subsets: Vec<Value> = subs.iter().map(|s| to_value(&s.subsets)).collect();
            let mut lines = vec![format!("{} closed subpresheaves", subs.len())];
            lines.extend(subs.iter().map(subsets_line));
            emit(cli.json, json!({"subsheaves": subsets}), lines.join("\n"));
        }
        Command::Atoms { site } => {
            let site = load_site(site)?;
            let atoms = enumerate_atoms(&site).map_err(sheaf_failure)?;
            let raw: Vec<Value> = atoms
                .iter()
                .map(|a| to_value(&a.to_raw(&site.category)))
                .collect();
            let mut lines = vec![format!("{} atoms", atoms.len())];
            lines.extend(atoms.iter().map(|a| format!("size {}", a.total_size())));
            emit(cli.json, json!({"atoms": raw}), lines.join("\n"));
        }
        Command::Connected { site, presheaf } => {
            let site = load_site(site)?;
            let f = load_presheaf(&site.category, presheaf)?;
            let connected = is_connected_object(&site, &f).map_err(sheaf_failure)?;
            emit(cli.json, json!({"connected": connected}), connected.to_string());
        }
        Command::Decompose { site } => {
            let site = load_site(site)?;
            let td = terminal_decomposition(&site).map_err(sheaf_failure)?;
            let atoms: Vec<Value> = td.atoms.iter().map(|s| to_value(&s.subsets)).collect();
            let mut lines = vec![format!("{} summands", td.atoms.len())];
            lines.extend(td.atoms.iter().map(subsets_line));
            emit(
                cli.json,
                json!({
                    "terminal": to_value(&td.terminal.to_raw(&site.category)),
                    "atoms": atoms,
                }),
                lines.join("\n"),
            );
        }
        Command::Completions { file } => {
            let value: Value = read_json(file)?;
            let site = if value.get("category").is_some() {
                let raw: RawSite = serde_json::from_value(value)
                    .map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
                Site::from_raw(&raw)
                    .map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?
            } else {
                let raw: RawCategory = serde_json::from_value(value)
                    .map_err(|e| Failure::Malformed(format!("{}: {e}", file.display())))?;
                let cat = validate_category(&raw).map_err(|violations| {
                    let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                    Failure::Malformed(format!("{}: {}", file.display(), msgs.join("; ")))
                })?;
                let (sub, top) = reduce_to_dense(&cat);
                Site::new(sub, top).expect("reduction yields a valid site")
            };
            let td = terminal_decomposition(&site).map_err(sheaf_failure)?;
            emit(
                cli.json,
                json!({"completions": td.atoms.len()}),
                td.atoms.len().to_string(),
            );
        }
        Command::Canonical { site, atoms } => {
            let site = load_site(site)?;
            let mut named = Vec::new();
            for path in atoms {
                let name = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("atom")
                    .to_string();
                named.push((name, load_presheaf(&site.category, path)?));
            }
            let canonical = restricted_canonical_topology(&site, &named).map_err(sheaf_failure)?;
            let transformations: BTreeMap<&String, Value> = canonical
                .transformations
                .iter()
                .map(|(id, nt)| (id, to_value(&nt.components)))
                .collect();
            emit(
                cli.json,
                json!({
                    "site": to_value(&canonical.site.to_raw()),
                    "transformations": transformations,
                }),
                site_summary(&canonical.site),
            );
        }
        Command::Eval { structure, formula, assignments } => {
            let m = load_structure(structure)?;
            let phi: Formula = read_json(formula)?;
            let mut assignment = Assignment::new();
            for binding in assignments {
                let (var, elem) = binding.split_once('=').ok_or_else(|| {
                    Failure::Malformed(format!("assignment `{binding}` is not VAR=ELEM"))
                })?;
                assignment.insert(var.to_string(), elem.to_string());
            }
            let verdict = eval(&m, &phi, &assignment).map_err(model_failure)?;
            emit(cli.json, json!({"value": verdict}), verdict.to_string());
        }
        Command::Sequent { structure, sequent } => {
            let m = load_structure(structure)?;
            let seq: Sequent = read_json(sequent)?;
            let verdict = satisfies_sequent(&m, &seq).map_err(model_failure)?;
            let human = match &verdict.counterexample {
                None => "holds".to_string(),
                Some(assignment) => {
                    let bindings: Vec<String> =
                        assignment.iter().map(|(v, e)| format!("{v}={e}")).collect();
                    format!("fails at {}", bindings.join(", "))
                }
            };
            emit(cli.json, to_value(&verdict), human);
        }
        Command::Cardseq { structure, size } => {
            let m = load_structure(structure)?;
            let (lower, upper) = cardinality_sequents(*size, &m.signature);
            let satisfied = satisfies_sequent(&m, &lower).map_err(model_failure)?.holds
                && satisfies_sequent(&m, &upper).map_err(model_failure)?.holds;
            emit(
                cli.json,
                json!({
                    "size": size,
                    "at_least": to_value(&lower),
                    "at_most": to_value(&upper),
                    "satisfied": satisfied,
                }),
                satisfied.to_string(),
            );
        }
        Command::Iso { left, right } => {
            let m = load_structure(left)?;
            let n = load_structure(right)?;
            match back_and_forth(&m, &n).map_err(model_failure)? {
                Some(map) => {
                    let mut lines = vec!["isomorphic".to_string()];
                    lines.extend(map.iter().map(|(a, b)| format!("{a} -> {b}")));
                    emit(cli.json, json!({"isomorphic": true, "map": map}), lines.join("\n"));
                }
                None => emit(
                    cli.json,
                    json!({"isomorphic": false, "map": null}),
                    "not isomorphic".to_string(),
                ),
            }
        }
        Command::Homog { structure } => {
            let m = load_structure(structure)?;
            match homogeneity_witness(&m).map_err(model_failure)? {
                None => emit(cli.json, json!({"homogeneous": true, "witness": null}), "homogeneous".into()),
                Some(w) => {
                    let pairs: Vec<String> =
                        w.pairs.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
                    emit(
                        cli.json,
                        json!({"homogeneous": false, "witness": to_value(&w)}),
                        format!("not homogeneous, witness {}", pairs.join(", ")),
                    );
                }
            }
        }
        Command::Aut { structure } => {
            let m = load_structure(structure)?;
            let g = automorphisms(&m);
            emit(cli.json, to_value(&g.to_raw()), group_summary(&g));
        }
        Command::Orbits { group, k } => {
            let g = load_group(group)?;
            let orbits = orbits_on_tuples(&g, *k).map_err(group_failure)?;
            let mut lines = vec![format!("{} orbits", orbits.len())];
            lines.extend(orbits.iter().map(|o| {
                let tuples: Vec<String> =
                    o.iter().map(|t| format!("({})", t.join(","))).collect();
                tuples.join(" ")
            }));
            emit(cli.json, json!({"orbits": orbits}), lines.join("\n"));
        }
        Command::Stab { group, points } => {
            let g = load_group(group)?;
            let h = stabilizer(&g, points).map_err(group_failure)?;
            emit(cli.json, to_value(&h.to_raw()), group_summary(&h));
        }
        Command::GsetAtoms { group } => {
            let g = load_group(group)?;
            let classes = subgroup_conjugacy_classes(&g, cli.bound).map_err(group_failure)?;
            let actions = transitive_gsets(&g, cli.bound).map_err(group_failure)?;
            let mut atom_count = 0usize;
            let mut sizes = Vec::new();
            for x in &actions {
                let (cat, p) = gset_as_presheaf(x);
                if is_atom(&Site::atomic(&cat), &p) {
                    atom_count += 1;
                }
                sizes.push(x.carrier().len());
            }
            let agree = atom_count == classes.len();
            emit(
                cli.json,
                json!({
                    "subgroup_classes": classes.len(),
                    "action_sizes": sizes,
                    "atoms": atom_count,
                    "agree": agree,
                }),
                format!(
                    "{} subgroup classes, {} atoms, {}",
                    classes.len(),
                    atom_count,
                    if agree { "agree" } else { "disagree" }
                ),
            );
        }
        Command::Suite { dir } => return run_corpus_suite(cli, dir),
        Command::Corpus { dir } => {
            let written = write_corpus(dir)?;
            emit(
                cli.json,
                json!({"written": written}),
                format!("wrote {} files under {}", written.len(), dir.display()),
            );
        }
    }
    Ok(())
}

/// Loads `<dir>/categories|structures|groups/*.json`, reporting files that
/// fail validation as failing checks, then runs the invariant suite over
/// whatever loaded.
fn run_corpus_suite(cli: &Cli, dir: &Path) -> Result<(), Failure> {
    if !dir.is_dir() {
        return Err(Failure::Malformed(format!(
            "corpus missing: {} is not a directory",
            dir.display()
        )));
    }
    let mut file_failures = Vec::new();
    let mut file_count = 0usize;

    let mut corpus = Corpus {
        categories: Vec::new(),
        structures: Vec::new(),
        groups: Vec::new(),
    };
    for (stem, path) in corpus_files(&dir.join("categories"))? {
        file_count += 1;
        match load_category(&path) {
            Ok(cat) => corpus.categories.push((stem, cat)),
            Err(f) => file_failures.push(failure_text(f)),
        }
    }
    for (stem, path) in corpus_files(&dir.join("structures"))? {
        file_count += 1;
        match load_structure(&path) {
            Ok(m) => corpus.structures.push((stem, m)),
            Err(f) => file_failures.push(failure_text(f)),
        }
    }
    for (stem, path) in corpus_files(&dir.join("groups"))? {
        file_count += 1;
        match load_group(&path) {
            Ok(g) => corpus.groups.push((stem, g)),
            Err(f) => file_failures.push(failure_text(f)),
        }
    }

    if file_count == 0 {
        let warning = format!("corpus at {} contains no files; nothing to check", dir.display());
        if cli.json {
            say(&json!({"checks": [], "failed": 0, "warning": warning}).to_string());
        } else {
            say(&format!("warning: {warning}"));
            say("0 checks, 0 failed");
        }
        return Ok(());
    }

    let mut reports = vec![CheckReport {
        name: "corpus-files-valid".to_string(),
        passed: file_failures.is_empty(),
        detail: if file_failures.is_empty() {
            format!("{file_count} files")
        } else {
            file_failures.join("; ")
        },
    }];
    reports.extend(run_suite(&corpus, cli.bound));

    let failed = reports.iter().filter(|r| !r.passed).count();
    if cli.json {
        let checks: Vec<Value> = reports
            .iter()
            .map(|r| json!({"name": r.name, "passed": r.passed, "detail": r.detail}))
            .collect();
        say(&json!({"checks": checks, "failed": failed}).to_string());
    } else {
        for r in &reports {
            if r.passed {
                say(&format!("PASS {} ({})", r.name, r.detail));
            } else {
                say(&format!("FAIL {}: {}", r.name, r.detail));
            }
        }
        say(&format!("{} checks, {} failed", reports.len(), failed));
    }
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

fn failure_text(f: Failure) -> String {
    match f {
        Failure::Malformed(m) | Failure::Precondition(m) => m,
        Failure::Checks(n) => format!("{n} failing checks"),
    }
}

/// Sorted `(stem, path)` pairs of the `.json` files directly in `dir`; a
/// missing directory is an empty listing.
fn corpus_files(dir: &Path) -> Result<Vec<(String, PathBuf)>, Failure> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(_) => return Ok(out),
    };
    for entry in entries {
        let entry = entry.map_err(|e| Failure::Malformed(format!("{}: {e}", dir.display())))?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("file")
                .to_string();
            out.push((stem, path));
        }
    }
    out.sort();
    Ok(out)
}

fn write_pretty<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| Failure::Malformed(format!("{}: {e}", parent.display())))?;
    }
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| Failure::Malformed(format!("{}: {e}", path.display())))
}

fn write_corpus(dir: &Path) -> Result<Vec<String>, Failure> {
    let mut written = Vec::new();
    for (name, raw) in corpus::raw_categories() {
        let path = dir.join("categories").join(format!("{name}.json"));
        write_pretty(&path, &raw)?;
        written.push(path.display().to_string());

        let cat = validate_category(&raw).expect("built-in categories are valid");
        let site_path = dir.join("sites").join(format!("site_{name}.json"));
        write_pretty(&site_path, &Site::atomic(&cat).to_raw())?;
        written.push(site_path.display().to_string());
    }
    for (name, m) in corpus::structures() {
        let path = dir.join("structures").join(format!("{name}.json"));
        write_pretty(&path, &m)?;
        written.push(path.display().to_string());
    }
    for (name, raw) in corpus::raw_groups() {
        let path = dir.join("groups").join(format!("{name}.json"));
        write_pretty(&path, &raw)?;
        written.push(path.display().to_string());
    }
    written.sort();
    Ok(written)
}
