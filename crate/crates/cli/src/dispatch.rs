//! Routing from subcommands to library operations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use tate_core::adele::{self, Adele, Idele, RealPart};
use tate_core::arith::{format_rational, primes_up_to};
use tate_core::bruhat::{self, BruhatFunction};
use tate_core::characters::{self, AdditiveCharacter, MultCharacter};
use tate_core::cyclotomic::Cyclotomic;
use tate_core::finite_field::{self as ff, FiniteField, FqElement};
use tate_core::gamma::{self, Parity};
use tate_core::global::{self, GlobalCharacter, PoissonSpec};
use tate_core::local_zeta::{self, LocalValue, UnitaryCharacter};
use tate_core::padic::{self, FnSeries};
use tate_core::quadratic::{self, QuadExtElement, SquareClass};
use tate_core::PadicNumber;

use crate::args::*;
use crate::config::Settings;
use crate::emit::{complex, ResultDocument};
use crate::error::CliError;
use crate::parse::*;

/// A subcommand and the library operations it can reach.
pub struct Route {
    pub command: &'static str,
    pub operations: &'static [&'static str],
}

pub const ROUTES: &[Route] = &[
    Route {
        command: "expand",
        operations: &["padic-core::from_rational", "padic-core::valuation", "padic-core::abs_p", "padic-core::unit_part"],
    },
    Route {
        command: "arith",
        operations: &[
            "padic-core::add",
            "padic-core::mul",
            "padic-core::neg",
            "padic-core::factorial_valuation",
            "padic-core::series_sum",
        ],
    },
    Route { command: "inv", operations: &["padic-core::inverse"] },
    Route { command: "sqrt", operations: &["padic-core::hensel_sqrt"] },
    Route { command: "teichmuller", operations: &["padic-core::teichmuller"] },
    Route { command: "squareclass", operations: &["quad-ext::square_class"] },
    Route {
        command: "quadext",
        operations: &[
            "quad-ext::classify_quadratic",
            "quad-ext::norm",
            "quad-ext::abs_canonical",
            "quad-ext::abs_normalized",
        ],
    },
    Route { command: "sgn-tau", operations: &["quad-ext::sgn_tau"] },
    Route {
        command: "char-eval",
        operations: &[
            "characters::mult_eval",
            "characters::additive_eval",
            "characters::fractional_part",
            "characters::product_principle_check",
            "characters::enumerate_degree",
            "characters::chi_minus_one",
        ],
    },
    Route { command: "product-formula", operations: &["global-adelic::adelic_abs"] },
    Route {
        command: "fourier",
        operations: &["bruhat-harmonic::canonicalize", "bruhat-harmonic::fourier", "bruhat-harmonic::reflect"],
    },
    Route {
        command: "integrate",
        operations: &[
            "bruhat-harmonic::integrate_additive",
            "bruhat-harmonic::integrate_multiplicative",
            "bruhat-harmonic::log_abs_integral",
        ],
    },
    Route { command: "mellin", operations: &["bruhat-harmonic::mellin_indicator_unit"] },
    Route {
        command: "zeta-local",
        operations: &["local-zeta::local_zeta", "local-zeta::functional_equation_check"],
    },
    Route { command: "gauss", operations: &["local-zeta::gauss_sum", "local-zeta::vanishing_lemma_check"] },
    Route { command: "epsilon", operations: &["local-zeta::L_factor", "local-zeta::epsilon"] },
    Route {
        command: "rho",
        operations: &["local-zeta::rho", "local-zeta::gamma_R", "local-zeta::gamma_C", "local-zeta::rho_arch"],
    },
    Route { command: "root-number", operations: &["local-zeta::root_number"] },
    Route { command: "adele-reduce", operations: &["global-adelic::fundamental_domain_reduce"] },
    Route {
        command: "idele-decompose",
        operations: &["global-adelic::adelic_abs", "global-adelic::idele_unit_decomposition"],
    },
    Route { command: "theta", operations: &["global-adelic::theta", "global-adelic::psi"] },
    Route {
        command: "zeta-global",
        operations: &[
            "global-adelic::completed_zeta",
            "global-adelic::global_L",
            "global-adelic::global_epsilon",
            "global-adelic::euler_factor_ratio",
        ],
    },
    Route { command: "poisson", operations: &["global-adelic::poisson_check"] },
    Route {
        command: "ff",
        operations: &[
            "finite-field::frobenius",
            "finite-field::norm",
            "finite-field::trace",
            "finite-field::norm_surjectivity_check",
            "finite-field::rec_q",
        ],
    },
];

struct Out {
    ops: Vec<&'static str>,
    result: Value,
    provenance: &'static str,
    bounds: BTreeMap<String, f64>,
}

impl Out {
    fn new(ops: &[&'static str], provenance: &'static str, result: Value) -> Out {
        Out { ops: ops.to_vec(), result, provenance, bounds: BTreeMap::new() }
    }

    fn bound(mut self, name: &str, v: f64) -> Out {
        self.bounds.insert(name.to_string(), v);
        self
    }
}

pub fn dispatch(cmd: &Command, st: &Settings) -> Result<ResultDocument, CliError> {
    let (args, out) = match cmd {
        Command::Expand(a) => (echo(a), expand(a, st)?),
        Command::Arith(a) => (echo(a), arith(a, st)?),
        Command::Inv(a) => (echo(a), inv(a, st)?),
        Command::Sqrt(a) => (echo(a), sqrt(a, st)?),
        Command::Teichmuller(a) => (echo(a), teichmuller(a, st)?),
        Command::Squareclass(a) => (echo(a), squareclass(a, st)?),
        Command::Quadext(a) => (echo(a), quadext(a, st)?),
        Command::SgnTau(a) => (echo(a), sgn_tau(a, st)?),
        Command::CharEval(a) => (echo(a), char_eval(a, st)?),
        Command::ProductFormula(a) => (echo(a), product_formula(a)?),
        Command::Fourier(a) => (echo(a), fourier(a, st)?),
        Command::Integrate(a) => (echo(a), integrate(a, st)?),
        Command::Mellin(a) => (echo(a), mellin(a, st)?),
        Command::ZetaLocal(a) => (echo(a), zeta_local(a, st)?),
        Command::Gauss(a) => (echo(a), gauss(a, st)?),
        Command::Epsilon(a) => (echo(a), epsilon(a, st)?),
        Command::Rho(a) => (echo(a), rho(a, st)?),
        Command::RootNumber(a) => (echo(a), root_number(a, st)?),
        Command::AdeleReduce(a) => (echo(a), adele_reduce(a, st)?),
        Command::IdeleDecompose(a) => (echo(a), idele_decompose(a, st)?),
        Command::Theta(a) => (echo(a), theta(a)?),
        Command::ZetaGlobal(a) => (echo(a), zeta_global(a, st)?),
        Command::Poisson(a) => (echo(a), poisson(a, st)?),
        Command::Ff(a) => (echo(a), finite_field(a, st)?),
    };
    Ok(ResultDocument {
        command: cmd.name().to_string(),
        operations: out.ops.iter().map(|s| s.to_string()).collect(),
        inputs: json!({ "args": args, "settings": st }),
        result: out.result,
        provenance: out.provenance.to_string(),
        error_bounds: out.bounds,
    })
}

/// The arguments as JSON, without unset options.
fn echo<T: serde::Serialize>(a: &T) -> Value {
    let mut v = serde_json::to_value(a).expect("arguments serialize");
    if let Value::Object(m) = &mut v {
        m.retain(|_, x| !x.is_null() && x != &json!([]) && x != &json!(false));
    }
    v
}

fn rat(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

fn padic_value(x: &PadicNumber) -> Value {
    serde_json::to_value(x.to_json_value()).expect("p-adic numbers serialize")
}

fn cyc(c: &Cyclotomic) -> Value {
    json!({ "exact": c, "value": complex(c.to_complex()) })
}

fn local_value(v: &LocalValue) -> Value {
    serde_json::to_value(v).expect("local values serialize")
}

fn pole_at(s: Complex64) -> Value {
    json!({ "pole": true, "location": [s.re, s.im] })
}

/// A complex result, with a pole reported as a tagged value.
fn value_or_pole(r: tate_core::Result<Complex64>, s: Complex64, ctx: &str) -> Result<Value, CliError> {
    match r {
        Ok(z) => Ok(complex(z)),
        Err(tate_core::Error::PoleProximity { .. }) => Ok(pole_at(s)),
        Err(e) => Err(CliError::core(ctx)(e)),
    }
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn s_or_zero(st: &Settings) -> Complex64 {
    st.s.unwrap_or(Complex64::new(0.0, 0.0))
}

fn expand(a: &ExpandArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let r = match (&a.x, &a.num, &a.den) {
        (Some(x), None, None) => parse_rational(x)?,
        (None, Some(n), d) => {
            let d = parse_rational(d.as_deref().unwrap_or("1"))?;
            if d.is_zero() {
                return Err(CliError::Usage("--den must be nonzero".into()));
            }
            parse_rational(n)? / d
        }
        _ => return Err(CliError::Usage("give --x, or --num and optionally --den".into())),
    };
    let x = PadicNumber::from_ratio(&r, p, st.precision).map_err(CliError::core("expand"))?;
    let result = if x.is_zero() {
        json!({ "x": rat(&r), "p": p, "zero": true, "text": x.to_text() })
    } else {
        let v = x.valuation().map_err(CliError::core("valuation"))?;
        let table: Vec<Value> =
            x.digits().iter().enumerate().map(|(i, d)| json!({ "power": v + i as i64, "digit": d })).collect();
        json!({
            "x": rat(&r),
            "p": p,
            "valuation": v,
            "abs_p": rat(&x.abs_p().to_rational()),
            "unit_part": x.unit_part().map_err(CliError::core("unit part"))?.to_text(),
            "text": x.to_text(),
            "digits": table,
        })
    };
    Ok(Out::new(
        &["padic-core::from_rational", "padic-core::valuation", "padic-core::abs_p", "padic-core::unit_part"],
        "digit expansion of a rational in Q_p",
        result,
    ))
}

fn arith(a: &ArithArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let x = || parse_padic(need(&a.x, "x")?, p, st.precision);
    let y = || parse_padic(need(&a.y, "y")?, p, st.precision);
    let ctx = CliError::core;
    let done = |op: &'static str, z: PadicNumber| {
        Out::new(&[op], "field operations in Q_p", json!({ "value": padic_value(&z), "text": z.to_text() }))
    };
    Ok(match a.op {
        ArithOp::Add => done("padic-core::add", x()?.add(&y()?).map_err(ctx("add"))?),
        ArithOp::Sub => {
            let mut o = done("padic-core::add", x()?.sub(&y()?).map_err(ctx("sub"))?);
            o.ops.push("padic-core::neg");
            o
        }
        ArithOp::Mul => done("padic-core::mul", x()?.mul(&y()?).map_err(ctx("mul"))?),
        ArithOp::Div => {
            let mut o = done("padic-core::mul", x()?.div(&y()?).map_err(ctx("div"))?);
            o.ops.push("padic-core::inverse");
            o
        }
        ArithOp::Neg => done("padic-core::neg", x()?.neg()),
        ArithOp::Pow => done("padic-core::mul", x()?.pow(*need(&a.e, "e")?).map_err(ctx("pow"))?),
        ArithOp::FactorialValuation => {
            let n = *need(&a.n, "n")?;
            tate_core::arith::require_prime(p).map_err(ctx("factorial valuation"))?;
            Out::new(
                &["padic-core::factorial_valuation"],
                "valuation of n! by Legendre's formula",
                json!({ "n": n, "p": p, "valuation": padic::factorial_valuation(n, p) }),
            )
        }
        ArithOp::Series => series(a, p, st)?,
    })
}

fn series(a: &ArithArgs, p: u64, st: &Settings) -> Result<Out, CliError> {
    let target = a.target.unwrap_or(st.precision as i64);
    if target < 1 {
        return Err(CliError::Usage("--target must be positive".into()));
    }
    let prec = target as u32;
    let kind = *need(&a.series, "series")?;
    let (sum, terms, expected) = match kind {
        SeriesKind::NFactorial => {
            let s = FnSeries {
                term: |n: usize, _abs: i64| {
                    let mut f = BigInt::one();
                    for k in 2..=n as u64 {
                        f *= k;
                    }
                    PadicNumber::from_integer(f * n as u64, p, prec)
                },
                bound: |n: usize| padic::factorial_valuation(n as u64, p) as i64,
            };
            let (sum, n) = padic::series_sum(&s, p, target, a.budget).map_err(CliError::core("series"))?;
            (sum, n, -BigRational::one())
        }
        SeriesKind::Geometric => {
            let s = FnSeries {
                term: |n: usize, _abs: i64| PadicNumber::from_digits(p, n as i64, &[1]),
                bound: |n: usize| n as i64,
            };
            let (sum, n) = padic::series_sum(&s, p, target, a.budget).map_err(CliError::core("series"))?;
            let one = BigRational::one();
            (sum, n, &one / (&one - BigRational::from_integer(p.into())))
        }
    };
    Ok(Out::new(
        &["padic-core::series_sum"],
        "partial sums of a p-adically convergent series",
        json!({
            "sum": padic_value(&sum),
            "text": sum.to_text(),
            "terms": terms,
            "target": target,
            "expected": rat(&expected),
            "agrees": sum.agrees_with_rational(&expected),
        }),
    ))
}

fn inv(a: &XArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let x = parse_padic(&a.x, p, st.precision)?;
    let y = x.inverse().map_err(CliError::core("inverse"))?;
    Ok(Out::new(
        &["padic-core::inverse"],
        "inverse in Q_p",
        json!({ "value": padic_value(&y), "text": y.to_text() }),
    ))
}

fn sqrt(a: &XArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let x = parse_padic(&a.x, p, st.precision)?;
    let r = padic::hensel_sqrt(&x).map_err(CliError::core("hensel_sqrt"))?;
    let result = match r {
        Some(y) => {
            let sq = y.mul(&y).map_err(CliError::core("square"))?;
            json!({ "exists": true, "root": padic_value(&y), "text": y.to_text(), "square_agrees": sq.agrees_with(&x) })
        }
        None => json!({ "exists": false, "root": null }),
    };
    Ok(Out::new(&["padic-core::hensel_sqrt"], "square root by Hensel lifting", result))
}

fn teichmuller(a: &TeichmullerArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let z = match a.a {
        Some(r) => padic::teichmuller_of(r, p, st.precision),
        None => padic::teichmuller(p, st.precision),
    }
    .map_err(CliError::core("teichmuller"))?;
    let one = PadicNumber::one(p, st.precision);
    let zp = z.pow(p - 1).map_err(CliError::core("power"))?;
    Ok(Out::new(
        &["padic-core::teichmuller"],
        "Teichmüller representative",
        json!({
            "value": padic_value(&z),
            "text": z.to_text(),
            "residue": z.residue_mod(1).map_err(CliError::core("residue"))?.to_string(),
            "root_of_unity": zp.agrees_with(&one),
        }),
    ))
}

fn squareclass(a: &SquareclassArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    tate_core::arith::require_prime(p).map_err(CliError::core("square classes"))?;
    let result = match &a.x {
        Some(x) => {
            let x = parse_padic(x, p, st.precision)?;
            let c = quadratic::square_class(&x).map_err(CliError::core("square_class"))?;
            json!({ "class": c.label(), "is_square": c.is_one() })
        }
        None => {
            let rows: Vec<Value> = SquareClass::all(p)
                .iter()
                .map(|c| {
                    let rep = c.representative(st.precision.min(8))?;
                    Ok(json!({ "class": c.label(), "representative": format_rational(&rep.to_rational()) }))
                })
                .collect::<tate_core::Result<_>>()
                .map_err(CliError::core("square classes"))?;
            json!({ "count": rows.len(), "classes": rows })
        }
    };
    Ok(Out::new(&["quad-ext::square_class"], "square classes of Q_p^×", result))
}

fn quadext(a: &QuadextArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let ctx = CliError::core;
    let Some(label) = &a.tau else {
        let rows = quadratic::quadratic_extension_table(p).map_err(ctx("quadratic extensions"))?;
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| json!({ "tau": r.tau, "e": r.e, "f": r.f, "norm_group_classes": r.norm_group_classes.join(" ") }))
            .collect();
        return Ok(Out::new(
            &["quad-ext::classify_quadratic"],
            "quadratic extensions of Q_p and their norm groups",
            json!({ "p": p, "extensions": rows }),
        ));
    };
    let tau = SquareClass::parse_label(p, label).map_err(ctx("tau"))?;
    let ram = quadratic::classify_quadratic(&tau).map_err(ctx("classify_quadratic"))?;
    let mut result = json!({ "tau": tau.label(), "e": ram.e, "f": ram.f });
    let mut ops = vec!["quad-ext::classify_quadratic"];
    if a.x.is_some() || a.y.is_some() {
        let x = parse_padic(a.x.as_deref().unwrap_or("0"), p, st.precision)?;
        let y = parse_padic(a.y.as_deref().unwrap_or("0"), p, st.precision)?;
        let t = tau.representative(st.precision).map_err(ctx("tau"))?;
        let el = QuadExtElement::new(t, x, y).map_err(ctx("element"))?;
        let n = el.norm().map_err(ctx("norm"))?;
        let ac = el.abs_canonical().map_err(ctx("abs_canonical"))?;
        let an = el.abs_normalized().map_err(ctx("abs_normalized"))?;
        result["norm"] = Value::String(n.to_text());
        result["abs_canonical"] = json!({
            "p": ac.p,
            "half_exponent": ac.half_exponent,
            "squared": rat(&ac.squared().to_rational()),
            "value": ac.to_f64(),
        });
        result["abs_normalized"] = rat(&an.to_rational());
        ops.extend(["quad-ext::norm", "quad-ext::abs_canonical", "quad-ext::abs_normalized"]);
    }
    Ok(Out { ops, result, provenance: "arithmetic in Q_p(√τ)", bounds: BTreeMap::new() })
}

fn sgn_tau(a: &SgnTauArgs, st: &Settings) -> Result<Out, CliError> {
    let p = st.require_p()?;
    let tau = SquareClass::parse_label(p, &a.tau).map_err(CliError::core("tau"))?;
    let x = parse_padic(&a.x, p, st.precision)?;
    let sign = quadratic::sgn_tau(&tau, &x).map_err(CliError::core("sgn_tau"))?;
    Ok(Out::new(
        &["quad-ext::sgn_tau"],
        "membership in the norm group of Q_p(√τ)",
        json!({ "tau": tau.label(), "sign": sign }),
    ))
}

fn character(text: &str, st: &Settings, s: Complex64) -> Result<MultCharacter, CliError> {
    parse_character(text, st.require_p()?, s)
}

fn char_eval(a: &CharEvalArgs, st: &Settings) -> Result<Out, CliError> {
    let ctx = CliError::core;
    let prov = "additive and multiplicative characters of Q_p";
    Ok(match a.op {
        CharOp::Mult => {
            let chi = character(need(&a.character, "char")?, st, s_or_zero(st))?;
            let x = parse_padic(need(&a.x, "x")?, chi.p, st.precision)?;
            let v = chi.eval(&x).map_err(ctx("evaluation"))?;
            Out::new(
                &["characters::mult_eval"],
                prov,
                json!({
                    "degree": chi.degree(),
                    "valuation": v.valuation,
                    "angle": v.angle,
                    "value": complex(v.to_complex()),
                }),
            )
        }
        CharOp::Additive => {
            let p = st.require_p()?;
            let t = parse_rational(a.t.as_deref().unwrap_or("1"))?;
            let psi = AdditiveCharacter::new(p, t).map_err(ctx("additive character"))?;
            let x = parse_padic(need(&a.x, "x")?, p, st.precision)?;
            let ang = psi.eval(&x).map_err(ctx("evaluation"))?;
            Out::new(
                &["characters::additive_eval"],
                prov,
                json!({ "conductor_level": psi.conductor_level(), "angle": ang, "value": complex(ang.to_complex()) }),
            )
        }
        CharOp::FractionalPart | CharOp::IntegralPart => {
            let p = st.require_p()?;
            let x = parse_padic(need(&a.x, "x")?, p, st.precision)?;
            let f = characters::fractional_part(&x).map_err(ctx("fractional part"))?;
            let i = characters::integral_part(&x).map_err(ctx("integral part"))?;
            Out::new(
                &["characters::fractional_part"],
                prov,
                json!({ "fractional_part": rat(&f), "integral_part": i.to_text() }),
            )
        }
        CharOp::ProductPrinciple => {
            let x = parse_rational(need(&a.x, "x")?)?;
            let pp = characters::product_principle_check(&x).map_err(ctx("product principle"))?;
            let local: Vec<Value> =
                pp.local.iter().map(|(p, f)| json!({ "p": p, "fractional_part": rat(f) })).collect();
            Out::new(
                &["characters::product_principle_check"],
                prov,
                json!({ "local": local, "integer_witness": pp.witness.to_string() }),
            )
        }
        CharOp::EnumerateDegree => {
            let p = st.require_p()?;
            let n = *need(&a.n, "n")?;
            let count = characters::enumerate_degree(p, n).map_err(ctx("enumerate_degree"))?;
            Out::new(&["characters::enumerate_degree"], prov, json!({ "p": p, "n": n, "count": count }))
        }
        CharOp::ChiMinusOne => {
            let chi = character(need(&a.character, "char")?, st, s_or_zero(st))?;
            let ang = chi.chi_minus_one();
            let sign = if ang.is_zero() { 1 } else { -1 };
            Out::new(&["characters::chi_minus_one"], prov, json!({ "angle": ang, "sign": sign }))
        }
    })
}

fn product_formula(a: &XArgs) -> Result<Out, CliError> {
    let x = parse_rational(&a.x)?;
    let pf = adele::product_formula(&x).map_err(CliError::core("product formula"))?;
    let abs = adele::adelic_abs(&Idele::diagonal(x).map_err(CliError::core("idele"))?)
        .map_err(CliError::core("adelic_abs"))?;
    let local: Vec<Value> = pf.local.iter().map(|(p, v)| json!({ "p": p, "abs": rat(v) })).collect();
    Ok(Out::new(
        &["global-adelic::adelic_abs"],
        "product formula for a principal idele",
        json!({
            "local": local,
            "real": rat(&pf.real),
            "product": rat(&pf.product),
            "adelic_abs": abs.exact().map(|r| format_rational(&r)),
        }),
    ))
}

fn function(src: &FunctionSource, st: &Settings) -> Result<BruhatFunction, CliError> {
    let chosen = [src.input.is_some(), src.ball.is_some(), src.indicator.is_some(), src.units];
    if chosen.iter().filter(|b| **b).count() > 1 {
        return Err(CliError::Usage("give one of --input, --ball, --indicator, --units".into()));
    }
    if let Some(path) = &src.input {
        let f = load_function(path)?;
        if let Some(p) = st.p {
            if p != f.prime() {
                return Err(CliError::Usage(format!("function is over Q_{}, --p is {p}", f.prime())));
            }
        }
        return Ok(f);
    }
    let p = st.require_p()?;
    let ctx = CliError::core("building function");
    if let Some(k) = src.ball {
        return BruhatFunction::ball(p, k).map_err(ctx);
    }
    if let Some(spec) = &src.indicator {
        let (c, k) = spec
            .rsplit_once(':')
            .ok_or_else(|| CliError::Usage("--indicator takes CENTER:K".into()))?;
        let k = k.parse::<i64>().map_err(|_| CliError::Usage(format!("bad level in {spec:?}")))?;
        return BruhatFunction::indicator(p, parse_rational(c)?, k).map_err(ctx);
    }
    if src.units {
        return BruhatFunction::units(p).map_err(ctx);
    }
    Err(CliError::Usage("a function is required: --input, --ball, --indicator or --units".into()))
}

fn function_json(f: &BruhatFunction) -> Value {
    serde_json::to_value(f.to_json()).expect("functions serialize")
}

fn fourier(a: &FourierArgs, st: &Settings) -> Result<Out, CliError> {
    let mut f = function(&a.source, st)?;
    let mut ops = vec!["bruhat-harmonic::canonicalize"];
    for _ in 0..a.times {
        f = f.fourier().map_err(CliError::core("fourier"))?;
    }
    if a.times > 0 {
        ops.push("bruhat-harmonic::fourier");
    }
    if a.reflect {
        f = f.reflect().map_err(CliError::core("reflect"))?;
        ops.push("bruhat-harmonic::reflect");
    }
    Ok(Out {
        ops,
        result: json!({ "function": function_json(&f), "blocks": f.blocks().len(), "at_zero": cyc(&f.value_at_zero()) }),
        provenance: "self-dual Fourier transform on Q_p",
        bounds: BTreeMap::new(),
    })
}

fn integrate(a: &IntegrateArgs, st: &Settings) -> Result<Out, CliError> {
    let prov = "Haar integration on Q_p";
    Ok(match a.measure {
        Measure::Additive => {
            let f = function(&a.source, st)?;
            Out::new(&["bruhat-harmonic::integrate_additive"], prov, cyc(&f.integrate_additive()))
        }
        Measure::L2 => {
            let f = function(&a.source, st)?;
            Out::new(&["bruhat-harmonic::integrate_additive"], prov, cyc(&f.l2_norm_sqr()))
        }
        Measure::Multiplicative => {
            let f = function(&a.source, st)?;
            let v = f.integrate_multiplicative(a.k).map_err(CliError::core("integrate_multiplicative"))?;
            Out::new(&["bruhat-harmonic::integrate_multiplicative"], prov, cyc(&v))
        }
        Measure::Shell => {
            let p = st.require_p()?;
            tate_core::arith::require_prime(p).map_err(CliError::core("shell"))?;
            let n = *need(&a.n, "n")?;
            Out::new(
                &["bruhat-harmonic::integrate_additive"],
                prov,
                json!({ "n": n, "volume": rat(&bruhat::shell_volume(p, n)) }),
            )
        }
        Measure::LogAbs => {
            let p = st.require_p()?;
            tate_core::arith::require_prime(p).map_err(CliError::core("log integral"))?;
            let k = a.n.unwrap_or(60);
            if k < 0 {
                return Err(CliError::Usage("--n must be non-negative".into()));
            }
            let v = bruhat::log_abs_integral(p, k as u32);
            let limit = -(p as f64).ln() / (p as f64 - 1.0);
            // omitted shells: log p · (1 − x) Σ_{n>K} n x^n with x = 1/p
            let x = 1.0 / p as f64;
            let kf = k as f64;
            let tail = (p as f64).ln() * x.powf(kf + 1.0) * ((kf + 1.0) - kf * x) / (1.0 - x);
            Out::new(
                &["bruhat-harmonic::log_abs_integral"],
                prov,
                json!({ "terms": k, "value": v, "limit": limit, "difference": (v - limit).abs() }),
            )
            .bound("truncation", tail)
        }
    })
}

fn mellin(a: &CharArgs, st: &Settings) -> Result<Out, CliError> {
    let chi = character(&a.character, st, s_or_zero(st))?;
    let v = bruhat::mellin_indicator_unit(&chi).map_err(CliError::core("mellin"))?;
    Ok(Out::new(
        &["bruhat-harmonic::mellin_indicator_unit"],
        "Mellin transform of the indicator of Z_p^×",
        cyc(&v),
    ))
}

fn zeta_local(a: &ZetaLocalArgs, st: &Settings) -> Result<Out, CliError> {
    let s = st.require_s()?;
    let chi = character(&a.character, st, s)?;
    let f = if a.source.is_given() {
        function(&a.source, st)?
    } else {
        local_zeta::standard_function(&chi).map_err(CliError::core("standard function"))?
    };
    let z = local_zeta::local_zeta(&f, &chi);
    let mut result = json!({
        "degree": chi.degree(),
        "value": complex(z.map_err(CliError::core("local_zeta"))?),
    });
    let mut ops = vec!["local-zeta::local_zeta"];
    if a.check {
        let g = match &a.g {
            Some(path) => load_function(path)?,
            None => local_zeta::standard_function(&chi).map_err(CliError::core("standard function"))?,
        };
        let r = local_zeta::functional_equation_check(&f, &g, &chi).map_err(CliError::core("functional equation"))?;
        result["residual"] = json!({ "cross": r.cross, "rho": r.rho });
        result["passes"] = json!(r.cross < st.tolerance && (r.rho.is_nan() || r.rho < st.tolerance));
        ops.push("local-zeta::functional_equation_check");
    }
    Ok(Out { ops, result, provenance: "local zeta integral", bounds: BTreeMap::new() })
}

fn gauss(a: &GaussArgs, st: &Settings) -> Result<Out, CliError> {
    let chi = character(&a.character, st, Complex64::new(0.0, 0.0))?;
    if let Some(v) = &a.v {
        let v = parse_rational(v)?;
        let z = local_zeta::vanishing_lemma_check(&chi, &v).map_err(CliError::core("vanishing lemma"))?;
        return Ok(Out::new(
            &["local-zeta::vanishing_lemma_check"],
            "character sum over the units",
            json!({ "v": rat(&v), "value": complex(z), "modulus": z.norm() }),
        ));
    }
    let g = local_zeta::gauss_sum(&chi).map_err(CliError::core("gauss_sum"))?;
    let n = chi.degree() as i32;
    let expected = (chi.p as f64).powf(n as f64 / 2.0);
    Ok(Out::new(
        &["local-zeta::gauss_sum"],
        "Gauss sum of a ramified character",
        json!({
            "degree": n,
            "terms": g.terms,
            "value": complex(g.value),
            "modulus": g.value.norm(),
            "expected_modulus": expected,
        }),
    )
    .bound("modulus", (g.value.norm() - expected).abs()))
}

fn unitary(text: &str, w: f64, st: &Settings) -> Result<UnitaryCharacter, CliError> {
    Ok(UnitaryCharacter::new(&character(text, st, Complex64::new(0.0, 0.0))?, w))
}

fn epsilon(a: &UnitaryArgs, st: &Settings) -> Result<Out, CliError> {
    let s = st.require_s()?;
    let u = unitary(&a.character, a.w, st)?;
    let eps = u.epsilon(s).map_err(CliError::core("epsilon"))?;
    Ok(Out::new(
        &["local-zeta::L_factor", "local-zeta::epsilon"],
        "local ε and L factors",
        json!({
            "degree": u.degree(),
            "epsilon": complex(eps),
            "l_factor": local_value(&u.l_factor(s)),
            "dual_l_factor": local_value(&u.conj().l_factor(1.0 - s)),
        }),
    ))
}

fn rho(a: &RhoArgs, st: &Settings) -> Result<Out, CliError> {
    let s = st.require_s()?;
    match a.place {
        Place::Finite => {
            let u = unitary(&a.character, a.w, st)?;
            let r = u.rho(s).map_err(CliError::core("rho"))?;
            let mut result = json!({ "degree": u.degree(), "rho": local_value(&r) });
            if a.source.is_given() {
                let f = function(&a.source, st)?;
                let q = local_zeta::rho_quotient(&f, &u.at(s)).map_err(CliError::core("rho quotient"))?;
                result["quotient"] = complex(q);
                if let Some(r) = r.finite() {
                    result["difference"] = json!((q - r).norm());
                }
            }
            Ok(Out { ops: vec!["local-zeta::rho"], result, provenance: "local functional equation", bounds: BTreeMap::new() })
        }
        Place::Inf => {
            let parity = Parity::from_sigma(a.sigma).map_err(CliError::core("sigma"))?;
            let gr = value_or_pole(gamma::gamma_r(s), s, "gamma_R")?;
            let gc = value_or_pole(gamma::gamma_c(s), s, "gamma_C")?;
            let ra = value_or_pole(gamma::rho_arch(parity, a.w, s), s, "rho_arch")?;
            let mut result = json!({ "sigma": a.sigma, "gamma_r": gr, "gamma_c": gc, "rho": ra });
            if a.w == 0.0 {
                result["rho_closed"] = value_or_pole(gamma::rho_arch_closed(parity, s), s, "rho_arch")?;
            }
            Ok(Out::new(
                &["local-zeta::gamma_R", "local-zeta::gamma_C", "local-zeta::rho_arch"],
                "archimedean gamma factors",
                result,
            ))
        }
    }
}

fn root_number(a: &CharArgs, st: &Settings) -> Result<Out, CliError> {
    let chi = character(&a.character, st, Complex64::new(0.5, 0.0))?;
    let w = local_zeta::root_number(&chi).map_err(CliError::core("root_number"))?;
    Ok(Out::new(
        &["local-zeta::root_number"],
        "ε at the self-dual point",
        json!({ "degree": chi.degree(), "value": complex(w), "modulus": w.norm() }),
    )
    .bound("modulus", (w.norm() - 1.0).abs()))
}

fn build_adele(a: &AdeleArgs, st: &Settings) -> Result<Adele, CliError> {
    let mut x = Adele::diagonal(parse_rational(&a.x)?);
    for o in &a.overrides {
        let (p, r) = split_prime(o)?;
        let v = parse_padic(r, p, st.precision)?;
        x = x.with_override(v).map_err(CliError::core("override"))?;
    }
    if let Some(t) = a.real {
        x = x.with_real(t);
    }
    Ok(x)
}

fn adele_json(x: &Adele) -> Value {
    serde_json::to_value(x.to_json()).expect("adeles serialize")
}

fn adele_reduce(a: &AdeleArgs, st: &Settings) -> Result<Out, CliError> {
    let x = build_adele(a, st)?;
    let (d, r) = adele::fundamental_domain_reduce(&x).map_err(CliError::core("reduce"))?;
    let inside = d.in_fundamental_domain().map_err(CliError::core("domain test"))?;
    Ok(Out::new(
        &["global-adelic::fundamental_domain_reduce"],
        "reduction modulo Q into ∏Z_p × [0,1)",
        json!({ "rational": rat(&r), "representative": adele_json(&d), "in_domain": inside }),
    ))
}

fn real_json(r: &RealPart) -> Value {
    match r {
        RealPart::Exact(q) => rat(q),
        RealPart::Float(t) => json!(t),
    }
}

fn idele_decompose(a: &AdeleArgs, st: &Settings) -> Result<Out, CliError> {
    let x = Idele::new(build_adele(a, st)?).map_err(CliError::core("idele"))?;
    let abs = adele::adelic_abs(&x).map_err(CliError::core("adelic_abs"))?;
    let (q, u) = adele::idele_unit_decomposition(&x).map_err(CliError::core("unit decomposition"))?;
    Ok(Out::new(
        &["global-adelic::adelic_abs", "global-adelic::idele_unit_decomposition"],
        "idele absolute value and unit decomposition",
        json!({
            "abs": {
                "finite": rat(&abs.finite),
                "real": real_json(&abs.real),
                "value": abs.value(),
                "exact": abs.exact().map(|r| format_rational(&r)),
            },
            "q": rat(&q),
            "units": adele_json(u.adele()),
        }),
    ))
}

fn theta(a: &ThetaArgs) -> Result<Out, CliError> {
    let t = global::theta(a.x).map_err(CliError::core("theta"))?;
    let ps = global::psi(a.x).map_err(CliError::core("psi"))?;
    let inv = global::theta(1.0 / a.x).map_err(CliError::core("theta"))?;
    Ok(Out::new(
        &["global-adelic::theta", "global-adelic::psi"],
        "Jacobi theta function",
        json!({ "theta": t, "psi": ps, "inversion_residual": (inv - a.x.sqrt() * t).abs() }),
    ))
}

fn global_character(a: &ZetaGlobalArgs) -> Result<GlobalCharacter, CliError> {
    let mut chars = Vec::new();
    for r in &a.ramified {
        let (p, spec) = split_prime(r)?;
        chars.push(parse_character(spec, p, Complex64::new(0.0, 0.0))?);
    }
    let ctx = CliError::core("global character");
    match a.parity {
        None => GlobalCharacter::new(a.w, chars).map_err(ctx),
        Some(par) => {
            let parity = if par == ParityArg::Even { Parity::Even } else { Parity::Odd };
            GlobalCharacter::with_parity(a.w, chars, parity).map_err(ctx)
        }
    }
}

fn zeta_global(a: &ZetaGlobalArgs, st: &Settings) -> Result<Out, CliError> {
    let ctx = CliError::core;
    Ok(match a.op {
        GlobalOp::Zeta => {
            let s = st.require_s()?;
            let z = global::two_route_zeta(s, st.prime_bound).map_err(ctx("zeta"))?;
            Out::new(
                &["global-adelic::global_L", "global-adelic::completed_zeta"],
                "completed Λ(s) = π^{−s/2}Γ(s/2)ζ(s), by its Euler product and by the theta integral",
                json!({
                    "value": complex(z.euler),
                    "euler": complex(z.euler),
                    "theta": complex(z.theta),
                    "difference": z.difference,
                    "prime_bound": st.prime_bound,
                }),
            )
            .bound("truncation", z.truncation_bound)
        }
        GlobalOp::Lambda => {
            let s = st.require_s()?;
            let l = value_or_pole(global::completed_zeta(s), s, "completed_zeta")?;
            let r = value_or_pole(global::completed_zeta(1.0 - s), 1.0 - s, "completed_zeta")?;
            let mut result = json!({ "value": l, "reflected": r });
            if let (Some(x), Some(y)) = (l.as_array(), r.as_array()) {
                let d = Complex64::new(x[0].as_f64().unwrap() - y[0].as_f64().unwrap(), x[1].as_f64().unwrap() - y[1].as_f64().unwrap());
                result["difference"] = json!(d.norm());
            }
            Out::new(&["global-adelic::completed_zeta"], "completed zeta function Λ(s)", result)
        }
        GlobalOp::Residues => {
            let r = global::lambda_residues(a.h0, a.levels).map_err(ctx("residues"))?;
            Out::new(
                &["global-adelic::completed_zeta"],
                "residues of Λ(s) at s = 1 and s = 0",
                json!({ "at_one": complex(r.at_one), "at_zero": complex(r.at_zero) }),
            )
            .bound("at_one", r.at_one_error)
            .bound("at_zero", r.at_zero_error)
        }
        GlobalOp::L => {
            let s = st.require_s()?;
            let omega = global_character(a)?;
            let l = global::global_l(&omega, s, st.prime_bound).map_err(ctx("global L"))?;
            Out::new(
                &["global-adelic::global_L"],
                "truncated Euler product with its archimedean factor",
                json!({
                    "value": complex(l.value),
                    "finite": complex(l.finite),
                    "archimedean": complex(l.archimedean),
                    "primes": l.primes,
                    "prime_bound": l.prime_bound,
                }),
            )
            .bound("truncation", l.truncation_bound)
        }
        GlobalOp::Epsilon => {
            let s = st.require_s()?;
            let omega = global_character(a)?;
            let e = global::global_epsilon(&omega, s).map_err(ctx("global epsilon"))?;
            Out::new(&["global-adelic::global_epsilon"], "global ε factor", json!({ "value": complex(e) }))
        }
        GlobalOp::Rigidity => {
            let omega = global_character(a)?;
            let primes = primes_up_to(st.prime_bound);
            let r = global::rigidity_check(&omega, &primes).map_err(ctx("rigidity"))?;
            Out::new(
                &["global-adelic::euler_factor_ratio"],
                "exact cancellation of Euler factors",
                json!({
                    "primes": primes.len(),
                    "cancelled": r.cancelled.len(),
                    "remaining": r.remaining.len(),
                    "identically_one": r.is_identically_one(),
                }),
            )
        }
    })
}

fn poisson(a: &PoissonArgs, st: &Settings) -> Result<Out, CliError> {
    let x = Idele::new(build_adele(&a.point, st)?).map_err(CliError::core("idele"))?;
    let mut spec = PoissonSpec::standard();
    for sh in &a.shift {
        let (p, k) = split_prime(sh)?;
        let k = k.parse::<i64>().map_err(|_| CliError::Usage(format!("bad shift {sh:?}")))?;
        spec = spec.with_shift(p, k).map_err(CliError::core("shift"))?;
    }
    let r = global::poisson_check(&spec, &x).map_err(CliError::core("poisson"))?;
    Ok(Out::new(
        &["global-adelic::poisson_check"],
        "adelic Poisson summation",
        json!({
            "lhs": r.lhs,
            "rhs": r.rhs,
            "residual": r.residual,
            "lattice": r.lattice,
            "terms": r.terms,
            "passes": r.residual < st.tolerance,
        }),
    ))
}

fn element(field: &FiniteField, a: &FfArgs) -> Result<FqElement, CliError> {
    let c = parse_coeffs(need(&a.x, "x")?)?;
    field.from_coeffs(&c).map_err(CliError::core("element"))
}

fn coeffs(x: &FqElement) -> Value {
    json!(x.coeffs())
}

fn finite_field(a: &FfArgs, st: &Settings) -> Result<Out, CliError> {
    // rec_q needs no field unless an element is acted on
    let p = if a.op == FfOp::Rec && a.x.is_none() { 0 } else { st.require_p()? };
    let ctx = CliError::core;
    let bound = st.enumeration_bound;
    let prov = "finite fields and their Galois groups";
    let field = || {
        let m = a.f.checked_mul(a.n).filter(|m| *m > 0).ok_or_else(|| CliError::Usage("bad degrees".into()))?;
        FiniteField::new(p, m).map_err(ctx("field"))
    };
    let k = || u32::try_from(a.k).map_err(|_| CliError::Usage("--k must be non-negative here".into()));
    Ok(match a.op {
        FfOp::Describe => {
            let fl = field()?;
            let d = fl.describe();
            Out::new(
                &[],
                prov,
                json!({ "p": d.p, "degree": d.degree, "size": d.size, "modulus": d.modulus, "q": p.pow(a.f) }),
            )
        }
        FfOp::Frobenius => {
            let fl = field()?;
            let x = element(&fl, a)?;
            let y = fl.frobenius_power(&x, a.f, k()?).map_err(ctx("frobenius"))?;
            Out::new(&["finite-field::frobenius"], prov, json!({ "x": coeffs(&x), "image": coeffs(&y), "k": a.k }))
        }
        FfOp::Norm => {
            let fl = field()?;
            let x = element(&fl, a)?;
            let y = fl.norm(&x, a.f).map_err(ctx("norm"))?;
            let z = fl.norm_by_conjugates(&x, a.f).map_err(ctx("norm"))?;
            Out::new(&["finite-field::norm"], prov, json!({ "norm": coeffs(&y), "routes_agree": y == z }))
        }
        FfOp::Trace => {
            let fl = field()?;
            let x = element(&fl, a)?;
            let y = fl.trace(&x, a.f).map_err(ctx("trace"))?;
            let z = fl.trace_by_powers(&x, a.f).map_err(ctx("trace"))?;
            Out::new(&["finite-field::trace"], prov, json!({ "trace": coeffs(&y), "routes_agree": y == z }))
        }
        FfOp::Surjectivity => {
            let ok = ff::norm_surjectivity_check(p, a.f, a.n, bound).map_err(ctx("norm surjectivity"))?;
            Out::new(&["finite-field::norm_surjectivity_check"], prov, json!({ "surjective": ok }))
        }
        FfOp::Order => {
            let o = ff::frobenius_order(p, a.f, a.n, bound).map_err(ctx("frobenius order"))?;
            Out::new(&["finite-field::frobenius"], prov, json!({ "order": o, "degree": a.n }))
        }
        FfOp::Fixed => {
            let d = *need(&a.d, "d")?;
            let c = ff::fixed_points(p, a.f, a.n, d, bound).map_err(ctx("fixed points"))?;
            Out::new(&["finite-field::frobenius"], prov, json!({ "d": d, "fixed": c }))
        }
        FfOp::Rec => {
            let g = ff::rec_q(a.k, a.n).map_err(ctx("rec_q"))?;
            let mut result = json!({ "n": g.n, "k": g.k });
            if let Some(m) = a.m {
                let r = g.restrict(m).map_err(ctx("restrict"))?;
                let direct = ff::rec_q(a.k, m).map_err(ctx("rec_q"))?;
                result["restricted"] = json!({ "n": r.n, "k": r.k });
                result["compatible"] = json!(r == direct);
            }
            if a.x.is_some() {
                let fl = field()?;
                let x = element(&fl, a)?;
                result["image"] = coeffs(&g.act(&fl, a.f, &x).map_err(ctx("action"))?);
            }
            Out::new(&["finite-field::rec_q"], prov, result)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_are_unique() {
        let mut names: Vec<&str> = ROUTES.iter().map(|r| r.command).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), ROUTES.len());
        assert_eq!(ROUTES.len(), 24);
    }
}
