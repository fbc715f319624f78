use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "charp",
    version,
    about = "Differential forms, Cartier operator and p-curvature over F_p(x1..xn)"
)]
pub struct Cli {
    /// Characteristic, an odd prime.
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 3)]
    pub p: u32,
    /// Number of variables, 1 to 4.
    #[arg(short = 'n', long = "nvars", global = true, default_value_t = 1)]
    pub nvars: usize,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Read the main input expression from standard input.
    #[arg(long, global = true)]
    pub stdin: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression to normal form.
    Eval(FormArg),
    /// Exterior derivative of a function or 1-form.
    #[command(alias = "diff")]
    D(FormArg),
    /// Partial derivative of a function.
    Partial {
        #[command(flatten)]
        input: FormArg,
        /// Variable name, e.g. x or x2.
        #[arg(long = "var")]
        var: String,
    },
    /// Exact polynomial division.
    Divexact {
        #[command(flatten)]
        input: FormArg,
        #[arg(long)]
        divisor: String,
    },
    /// Logarithmic differential df/f.
    Dlog(FormArg),
    /// Whether a 1-form is closed.
    Closed(FormArg),
    /// p-basis decomposition f = sum x^a * f_a^p of a polynomial.
    Pbasis(FormArg),
    /// p-th root of a p-th power.
    Proot(FormArg),
    /// Cartier operator of a closed 1-form.
    Cartier {
        #[command(flatten)]
        input: FormArg,
        /// Use the one-variable (p-1)-st derivative formula instead.
        #[arg(long)]
        oracle: bool,
    },
    /// Inverse Cartier on representatives: sum a_i^p x_i^(p-1) dx_i.
    Gamma(FormArg),
    /// f with df = w, for closed w with C(w) = 0.
    Antider(FormArg),
    /// Logarithmic witness prod q_j^m_j on a chart.
    Logwitness {
        #[command(flatten)]
        input: FormArg,
        #[command(flatten)]
        charts: ChartArgs,
    },
    /// Maurer-Cartan form g^-1 dg.
    Mc {
        /// Matrix "a, b; c, d".
        #[arg(long)]
        matrix: Option<String>,
        /// Group element instead of a matrix: "f" or, for aff1, "f, f'".
        #[arg(long, conflicts_with = "matrix")]
        element: Option<String>,
        #[arg(long, value_enum, default_value_t = Tag::Gl)]
        tag: Tag,
    },
    /// Curvature dW + W^W of a matrix 1-form.
    Curv(OmegaArg),
    /// p-curvature psi(d_i) = (d_i + W_i)^p by operator iteration.
    PcurvBrute(OmegaArg),
    /// p-curvature (D + W(D))^p - W(D^p) along a derivation.
    PcurvAt {
        #[command(flatten)]
        omega: OmegaArg,
        /// Coefficients "f1, ..., fn" of D = sum f_i d_i.
        #[arg(long)]
        derivation: String,
    },
    /// p-curvature of d + w from the Cartier operator.
    PcurvAbelian {
        #[command(flatten)]
        input: FormArg,
        #[arg(long, value_enum)]
        tag: Tag,
    },
    /// Rank-1 p-curvature a^p + d^(p-1) a in one variable.
    PcurvOracle(FormArg),
    /// p-th power of a derivation.
    Dpow {
        /// Coefficients "f1, ..., fn" of D = sum f_i d_i.
        #[arg(long)]
        derivation: Option<String>,
    },
    /// Decide whether forms come from a torsor under mu_p, alpha_p or aff(1)^F.
    Classify {
        #[arg(value_enum)]
        group: Group,
        #[command(flatten)]
        input: FormArg,
        /// Second form w' (aff1).
        #[arg(long)]
        omegap: Option<String>,
        #[command(flatten)]
        charts: ChartArgs,
        /// Extra witness "f @ g1, g2" (aff1).
        #[arg(long)]
        witness: Vec<String>,
    },
    /// Torsor presentation of the boundary of a group element.
    Boundary {
        /// "f", or "f, f'" for aff1.
        #[arg(long)]
        element: Option<String>,
        #[arg(long, value_enum)]
        tag: Tag,
    },
    /// Kummer cocycle u_ij = (f_i/f_j)^(1/p) from witnesses.
    Cocycle {
        /// Witness "f @ g1, g2"; repeatable.
        #[arg(long)]
        witness: Vec<String>,
        /// Alternatively a form whose witnesses are searched on each --chart.
        #[arg(long, visible_alias = "expr", conflicts_with = "witness")]
        form: Option<String>,
        #[arg(long)]
        chart: Vec<String>,
    },
    /// Randomized cross-check batteries.
    Crosscheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fraction of the full battery sizes.
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
        /// Run a single battery, 1 to 9.
        #[arg(long)]
        battery: Option<u8>,
    },
}

#[derive(Args, Debug)]
pub struct FormArg {
    /// Input expression.
    #[arg(long, visible_aliases = ["expr", "omega"])]
    pub form: Option<String>,
}

#[derive(Args, Debug)]
pub struct OmegaArg {
    /// Matrix of 1-forms "a, b; c, d".
    #[arg(long)]
    pub omega: Option<String>,
    /// Expected matrix size.
    #[arg(long)]
    pub rank: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ChartArgs {
    /// Chart generators "g1, g2"; repeatable.
    #[arg(long)]
    pub chart: Vec<String>,
    /// Declared irreducibles for the default chart.
    #[arg(long)]
    pub declare: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    #[value(name = "g_m", alias = "gm")]
    Gm,
    #[value(name = "g_a", alias = "ga")]
    Ga,
    #[value(name = "gl")]
    Gl,
    #[value(name = "aff1")]
    Aff1,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    #[value(name = "mu_p")]
    MuP,
    #[value(name = "alpha_p")]
    AlphaP,
    #[value(name = "aff1")]
    Aff1,
}
