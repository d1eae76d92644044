//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::Overrides;

#[derive(Parser, Debug, Clone)]
#[command(name = "tate", version, about = "p-adic, adelic and finite-field computations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalArgs {
    /// The prime.
    #[arg(long, global = true, env = "TATE_P")]
    pub p: Option<u64>,
    /// Relative p-adic precision in digits [default: 20].
    #[arg(long, global = true, env = "TATE_PREC")]
    pub prec: Option<u32>,
    /// Complex argument as "re,im" or "re".
    #[arg(long, global = true, env = "TATE_S", allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Float tolerance for pass/fail fields [default: 1e-12].
    #[arg(long, global = true, env = "TATE_TOL")]
    pub tol: Option<f64>,
    /// Largest prime in truncated Euler products [default: 100000].
    #[arg(long = "prime-bound", global = true, env = "TATE_PRIME_BOUND")]
    pub prime_bound: Option<u64>,
    /// Largest field size enumerated by finite-field checks [default: 10000].
    #[arg(long = "enumeration-bound", global = true, env = "TATE_ENUMERATION_BOUND")]
    pub enumeration_bound: Option<u64>,
    /// Emit JSON instead of text.
    #[arg(long, global = true, env = "TATE_JSON")]
    pub json: bool,
    /// TOML file with defaults for the settings above.
    #[arg(long, global = true, env = "TATE_CONFIG")]
    pub config: Option<PathBuf>,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            precision: self.prec,
            tolerance: self.tol,
            prime_bound: self.prime_bound,
            enumeration_bound: self.enumeration_bound,
            p: self.p,
            s: self.s.clone(),
            json: self.json.then_some(true),
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Digit expansion of a rational in Q_p.
    Expand(ExpandArgs),
    /// Field operations, factorial valuations and series sums in Q_p.
    Arith(ArithArgs),
    /// Multiplicative inverse in Q_p.
    Inv(XArgs),
    /// Square root by Hensel lifting.
    Sqrt(XArgs),
    /// Teichmüller representatives.
    Teichmuller(TeichmullerArgs),
    /// Square class of x, or the list of classes.
    Squareclass(SquareclassArgs),
    /// Quadratic extensions: the class table, or norms in Q_p(√τ).
    Quadext(QuadextArgs),
    /// The quadratic character attached to Q_p(√τ).
    SgnTau(SgnTauArgs),
    /// Additive and multiplicative characters.
    CharEval(CharEvalArgs),
    /// Product of all absolute values of a rational.
    ProductFormula(XArgs),
    /// Fourier transform of a Bruhat function.
    Fourier(FourierArgs),
    /// Haar integrals.
    Integrate(IntegrateArgs),
    /// Mellin transform of the indicator of the units.
    Mellin(CharArgs),
    /// Local zeta integral Z(f, χ|·|^s).
    ZetaLocal(ZetaLocalArgs),
    /// Gauss sums and the vanishing lemma.
    Gauss(GaussArgs),
    /// Local ε and L factors.
    Epsilon(UnitaryArgs),
    /// Local functional-equation quotient ρ, finite or archimedean.
    Rho(RhoArgs),
    /// Root number W(χ̲).
    RootNumber(CharArgs),
    /// Reduce an adele into the fundamental domain.
    AdeleReduce(AdeleArgs),
    /// Adelic absolute value and unit decomposition of an idele.
    IdeleDecompose(AdeleArgs),
    /// Jacobi theta function.
    Theta(ThetaArgs),
    /// Global zeta and L-functions.
    ZetaGlobal(ZetaGlobalArgs),
    /// Adelic Poisson summation.
    Poisson(PoissonArgs),
    /// Finite fields, Frobenius and rec_q.
    Ff(FfArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Expand(_) => "expand",
            Command::Arith(_) => "arith",
            Command::Inv(_) => "inv",
            Command::Sqrt(_) => "sqrt",
            Command::Teichmuller(_) => "teichmuller",
            Command::Squareclass(_) => "squareclass",
            Command::Quadext(_) => "quadext",
            Command::SgnTau(_) => "sgn-tau",
            Command::CharEval(_) => "char-eval",
            Command::ProductFormula(_) => "product-formula",
            Command::Fourier(_) => "fourier",
            Command::Integrate(_) => "integrate",
            Command::Mellin(_) => "mellin",
            Command::ZetaLocal(_) => "zeta-local",
            Command::Gauss(_) => "gauss",
            Command::Epsilon(_) => "epsilon",
            Command::Rho(_) => "rho",
            Command::RootNumber(_) => "root-number",
            Command::AdeleReduce(_) => "adele-reduce",
            Command::IdeleDecompose(_) => "idele-decompose",
            Command::Theta(_) => "theta",
            Command::ZetaGlobal(_) => "zeta-global",
            Command::Poisson(_) => "poisson",
            Command::Ff(_) => "ff",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct XArgs {
    /// A rational "a/b", or a p-adic number in text form.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExpandArgs {
    /// A rational "a/b".
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["num", "den"])]
    pub x: Option<String>,
    /// Numerator, with --den as an alternative to --x.
    #[arg(long, allow_hyphen_values = true)]
    pub num: Option<String>,
    /// Denominator.
    #[arg(long, allow_hyphen_values = true)]
    pub den: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    FactorialValuation,
    Series,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesKind {
    /// Σ n·n!, which sums to −1.
    NFactorial,
    /// Σ p^n, which sums to 1/(1−p).
    Geometric,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ArithArgs {
    #[arg(long, value_enum)]
    pub op: ArithOp,
    /// First operand.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Second operand.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Exponent for pow.
    #[arg(long)]
    pub e: Option<u64>,
    /// Argument of factorial-valuation.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum)]
    pub series: Option<SeriesKind>,
    /// Target absolute precision of a series sum [default: --prec].
    #[arg(long)]
    pub target: Option<i64>,
    /// Maximum number of series terms.
    #[arg(long)]
    pub budget: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TeichmullerArgs {
    /// Lift of this residue; without it, the lift of the fixed generator.
    #[arg(long)]
    pub a: Option<u64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SquareclassArgs {
    /// Classify this number; omit for the list of classes.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct QuadextArgs {
    /// Class label of τ: u, p or up (odd p).
    #[arg(long)]
    pub tau: Option<String>,
    /// Rational part of x + y√τ.
    #[arg(long, allow_hyphen_values = true, requires = "tau")]
    pub x: Option<String>,
    /// Coefficient of √τ.
    #[arg(long, allow_hyphen_values = true, requires = "tau")]
    pub y: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SgnTauArgs {
    /// Class label of τ: u, p or up.
    #[arg(long)]
    pub tau: String,
    /// A nonzero rational or p-adic number.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharOp {
    Mult,
    Additive,
    FractionalPart,
    IntegralPart,
    ProductPrinciple,
    EnumerateDegree,
    ChiMinusOne,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CharEvalArgs {
    #[arg(long, value_enum, default_value = "mult")]
    pub op: CharOp,
    /// unramified, legendre, odd:ALPHA or dyadic:BETA,GAMMA.
    #[arg(long = "char")]
    pub character: Option<String>,
    /// The argument, a rational or p-adic number.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Twist t of the additive character x ↦ χ_p(tx).
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Degree for enumerate-degree.
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct FunctionSource {
    /// JSON Bruhat function, or a result document containing one.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// The indicator of p^k Z_p.
    #[arg(long, allow_hyphen_values = true)]
    pub ball: Option<i64>,
    /// The indicator of CENTER + p^k Z_p, as "CENTER:K".
    #[arg(long, allow_hyphen_values = true)]
    pub indicator: Option<String>,
    /// The indicator of Z_p^×.
    #[arg(long)]
    pub units: bool,
}

impl FunctionSource {
    pub fn is_given(&self) -> bool {
        self.input.is_some() || self.ball.is_some() || self.indicator.is_some() || self.units
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FourierArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
    /// Apply the transform this many times.
    #[arg(long, default_value_t = 1)]
    pub times: u32,
    /// Apply x ↦ −x after the transforms.
    #[arg(long)]
    pub reflect: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    Additive,
    Multiplicative,
    L2,
    LogAbs,
    Shell,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct IntegrateArgs {
    #[arg(long, value_enum, default_value = "additive")]
    pub measure: Measure,
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
    /// Weight |x|^k for the multiplicative measure.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub k: i64,
    /// Shell index for shell, number of shells for log-abs.
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<i64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CharArgs {
    /// unramified, legendre, odd:ALPHA or dyadic:BETA,GAMMA.
    #[arg(long = "char", default_value = "unramified")]
    pub character: String,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ZetaLocalArgs {
    #[arg(long = "char", default_value = "unramified")]
    pub character: String,
    /// Test function; the standard one for the character if omitted.
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
    /// Also check Z(f,χ)Z(ĝ,χ̌) = Z(g,χ)Z(f̂,χ̌) against g.
    #[arg(long)]
    pub check: bool,
    /// The second function for --check; the standard one if omitted.
    #[arg(long)]
    pub g: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GaussArgs {
    #[arg(long = "char", default_value = "legendre")]
    pub character: String,
    /// Evaluate Σ χ̲(u)χ_p(uv) over the units instead, for |v| ≠ p^n.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct UnitaryArgs {
    #[arg(long = "char", default_value = "unramified")]
    pub character: String,
    /// Imaginary shift w of the unitary character χ̲|·|^{−iw}.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Place {
    Finite,
    Inf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RhoArgs {
    #[arg(long, value_enum, default_value = "finite")]
    pub place: Place,
    #[arg(long = "char", default_value = "unramified")]
    pub character: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w: f64,
    /// Archimedean parity: 0 for x ↦ |x|^s, 1 for sign(x)|x|^s.
    #[arg(long, default_value_t = 0)]
    pub sigma: u8,
    /// Compute Z(f,χ)/Z(f̂,χ̌) for this function as well.
    #[command(flatten)]
    #[serde(flatten)]
    pub source: FunctionSource,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct AdeleArgs {
    /// The diagonal rational.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub x: String,
    /// Replace the component at P by a rational: "P:RATIONAL". Repeatable.
    #[arg(long = "override", allow_hyphen_values = true)]
    pub overrides: Vec<String>,
    /// Replace the real component.
    #[arg(long, allow_hyphen_values = true)]
    pub real: Option<f64>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ThetaArgs {
    /// A positive real.
    #[arg(long)]
    pub x: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlobalOp {
    /// ζ(s) by the Euler product and by the theta integral.
    Zeta,
    /// Λ(s) = π^{−s/2}Γ(s/2)ζ(s).
    Lambda,
    /// Residues of Λ at 1 and 0.
    Residues,
    /// Truncated L(ω, s).
    L,
    /// Global ε(ω, s).
    Epsilon,
    /// Exact Euler-factor cancellation of ω against itself.
    Rigidity,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ZetaGlobalArgs {
    #[arg(long, value_enum, default_value = "zeta")]
    pub op: GlobalOp,
    /// Local unit character at a ramified prime: "P:CHAR". Repeatable.
    #[arg(long)]
    pub ramified: Vec<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub w: f64,
    #[arg(long, value_enum)]
    pub parity: Option<ParityArg>,
    /// First step of the Richardson sequence for residues.
    #[arg(long, default_value_t = 0.1)]
    pub h0: f64,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PoissonArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub point: AdeleArgs,
    /// Use 1_{p^k Z_p} at P: "P:K". Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub shift: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FfOp {
    Describe,
    Frobenius,
    Norm,
    Trace,
    Surjectivity,
    Order,
    Fixed,
    Rec,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FfArgs {
    #[arg(long, value_enum, default_value = "describe")]
    pub op: FfOp,
    /// q = p^f.
    #[arg(long, default_value_t = 1)]
    pub f: u32,
    /// Work in F_{q^n}.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Element of F_{q^n}: coefficients over F_p, constant term first.
    #[arg(long)]
    pub x: Option<String>,
    /// Exponent of rec_q, or the Frobenius power.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub k: i64,
    /// Restriction level m | n for rec.
    #[arg(long)]
    pub m: Option<u32>,
    /// Subfield degree d | n for fixed.
    #[arg(long)]
    pub d: Option<u32>,
}
