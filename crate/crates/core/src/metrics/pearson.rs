//! Sample Pearson correlation with a two-tailed t-test at the 5% and 1% levels.

use num::{Signed, Zero};
use serde::Serialize;

use super::MetricsError;
use crate::rational::{self, int, Rational};

/// Significance levels reported by [`pearson_r`].
pub const LEVELS: [f64; 2] = [0.05, 0.01];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Correlation {
    pub r: f64,
    /// Exact squared coefficient.
    #[serde(skip)]
    pub r_squared: Rational,
    pub n: usize,
    /// Test statistic `r * sqrt((n - 2) / (1 - r^2))`; infinite for |r| = 1.
    #[serde(skip)]
    pub t: f64,
    /// Levels at which the two-tailed test rejects zero correlation.
    pub significant_at: Vec<f64>,
}

/// Pearson's r over exact inputs. Sums of squares and the squared coefficient
/// are exact; only the final square root is taken in floating point.
pub fn pearson_r(xs: &[Rational], ys: &[Rational]) -> Result<Correlation, MetricsError> {
    if xs.len() != ys.len() {
        return Err(MetricsError::DegenerateInput(format!(
            "length mismatch ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(MetricsError::DegenerateInput(format!("need at least 3 points, got {n}")));
    }
    let mx = rational::mean(xs.iter()).expect("nonempty");
    let my = rational::mean(ys.iter()).expect("nonempty");
    let mut sxx = Rational::zero();
    let mut syy = Rational::zero();
    let mut sxy = Rational::zero();
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - &mx;
        let dy = y - &my;
        sxx += &dx * &dx;
        syy += &dy * &dy;
        sxy += &dx * &dy;
    }
    if sxx.is_zero() || syy.is_zero() {
        return Err(MetricsError::DegenerateInput("constant sequence".into()));
    }
    let r_squared = &sxy * &sxy / (&sxx * &syy);
    let magnitude = if r_squared == int(1) { 1.0 } else { rational::to_f64(&r_squared).sqrt().min(1.0) };
    let r = if sxy.is_negative() { -magnitude } else { magnitude };

    let df = (n - 2) as u64;
    let t = if r_squared == int(1) {
        f64::INFINITY.copysign(r)
    } else {
        let t_squared = &r_squared * int(df as i64) / (int(1) - &r_squared);
        rational::to_f64(&t_squared).sqrt().copysign(r)
    };
    let significant_at = LEVELS
        .iter()
        .copied()
        .filter(|&alpha| t.abs() > t_critical(df, alpha))
        .collect();
    Ok(Correlation { r, r_squared, n, t, significant_at })
}

/// Two-tailed Student-t critical value for `df` degrees of freedom at level
/// `alpha` (0.05 or 0.01). Tabulated up to 200, Cornish-Fisher beyond.
pub fn t_critical(df: u64, alpha: f64) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    let column = if alpha == 0.05 {
        0
    } else if alpha == 0.01 {
        1
    } else {
        panic!("unsupported significance level {alpha}");
    };
    if df as usize <= T_TABLE.len() {
        let row = T_TABLE[df as usize - 1];
        return if column == 0 { row.0 } else { row.1 };
    }
    let z = if column == 0 { Z_975 } else { Z_995 };
    cornish_fisher(z, df as f64)
}

const Z_975: f64 = 1.959_963_984_540_054;
const Z_995: f64 = 2.575_829_303_548_900_4;

fn cornish_fisher(z: f64, df: f64) -> f64 {
    let z3 = z.powi(3);
    let z5 = z.powi(5);
    let z7 = z.powi(7);
    let z9 = z.powi(9);
    z + (z3 + z) / (4.0 * df)
        + (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * df.powi(2))
        + (3.0 * z7 + 19.0 * z5 + 17.0 * z3 - 15.0 * z) / (384.0 * df.powi(3))
        + (79.0 * z9 + 776.0 * z7 + 1482.0 * z5 - 1920.0 * z3 - 945.0 * z) / (92160.0 * df.powi(4))
}

/// (alpha = 0.05, alpha = 0.01) two-tailed critical values, df = 1..=200.
#[rustfmt::skip]
const T_TABLE: [(f64, f64); 200] = [
    (12.7062047364, 63.6567411629),
    (4.3026527297, 9.9248432009),
    (3.1824463053, 5.8409093097),
    (2.7764451052, 4.6040948714),
    (2.5705818356, 4.0321429836),
    (2.4469118511, 3.7074280213),
    (2.3646242516, 3.4994832974),
    (2.3060041352, 3.3553873313),
    (2.2621571629, 3.2498355416),
    (2.2281388520, 3.1692726726),
    (2.2009851601, 3.1058065155),
    (2.1788128297, 3.0545395894),
    (2.1603686565, 3.0122758387),
    (2.1447866879, 2.9768427344),
    (2.1314495456, 2.9467128835),
    (2.1199052992, 2.9207816225),
    (2.1098155778, 2.8982305196),
    (2.1009220402, 2.8784404727),
    (2.0930240544, 2.8609346064),
    (2.0859634473, 2.8453397098),
    (2.0796138447, 2.8313595580),
    (2.0738730679, 2.8187560606),
    (2.0686576104, 2.8073356838),
    (2.0638985616, 2.7969395048),
    (2.0595385528, 2.7874358137),
    (2.0555294386, 2.7787145333),
    (2.0518305165, 2.7706829571),
    (2.0484071418, 2.7632624555),
    (2.0452296421, 2.7563859037),
    (2.0422724563, 2.7499956536),
    (2.0395134464, 2.7440419193),
    (2.0369333435, 2.7384814820),
    (2.0345152974, 2.7332766424),
    (2.0322445093, 2.7283943671),
    (2.0301079283, 2.7238055892),
    (2.0280940010, 2.7194846304),
    (2.0261924630, 2.7154087215),
    (2.0243941639, 2.7115576019),
    (2.0226909200, 2.7079131835),
    (2.0210753903, 2.7044592674),
    (2.0195409704, 2.7011813036),
    (2.0180817028, 2.6980661862),
    (2.0166921992, 2.6951020792),
    (2.0153675744, 2.6922782657),
    (2.0141033889, 2.6895850194),
    (2.0128955989, 2.6870134922),
    (2.0117405137, 2.6845556179),
    (2.0106347576, 2.6822040270),
    (2.0095752371, 2.6799519736),
    (2.0085591121, 2.6777932709),
    (2.0075837703, 2.6757222341),
    (2.0066468051, 2.6737336306),
    (2.0057459953, 2.6718226362),
    (2.0048792882, 2.6699847957),
    (2.0040447833, 2.6682159885),
    (2.0032407188, 2.6665123976),
    (2.0024654593, 2.6648704822),
    (2.0017174841, 2.6632869535),
    (2.0009953781, 2.6617587522),
    (2.0002978220, 2.6602830289),
    (1.9996235850, 2.6588571267),
    (1.9989715170, 2.6574785650),
    (1.9983405425, 2.6561450251),
    (1.9977296543, 2.6548543374),
    (1.9971379084, 2.6536044694),
    (1.9965644190, 2.6523935150),
    (1.9960083540, 2.6512196852),
    (1.9954689314, 2.6500812987),
    (1.9949454151, 2.6489767744),
    (1.9944371118, 2.6479046238),
    (1.9939433678, 2.6468634442),
    (1.9934635667, 2.6458519132),
    (1.9929971259, 2.6448687821),
    (1.9925434952, 2.6439128717),
    (1.9921021540, 2.6429830670),
    (1.9916726096, 2.6420783131),
    (1.9912543954, 2.6411976114),
    (1.9908470688, 2.6403400153),
    (1.9904502102, 2.6395046275),
    (1.9900634213, 2.6386905963),
    (1.9896863235, 2.6378971134),
    (1.9893185571, 2.6371234104),
    (1.9889597802, 2.6363687569),
    (1.9886096670, 2.6356324580),
    (1.9882679075, 2.6349138523),
    (1.9879342062, 2.6342123094),
    (1.9876082816, 2.6335272291),
    (1.9872898648, 2.6328580385),
    (1.9869786995, 2.6322041912),
    (1.9866745407, 2.6315651656),
    (1.9863771544, 2.6309404634),
    (1.9860863170, 2.6303296083),
    (1.9858018143, 2.6297321451),
    (1.9855234419, 2.6291476383),
    (1.9852510035, 2.6285756708),
    (1.9849843115, 2.6280158435),
    (1.9847231860, 2.6274677740),
    (1.9844674544, 2.6269310958),
    (1.9842169515, 2.6264054573),
    (1.9839715184, 2.6258905214),
    (1.9837310029, 2.6253859647),
    (1.9834952585, 2.6248914763),
    (1.9832641447, 2.6244067580),
    (1.9830375264, 2.6239315231),
    (1.9828152737, 2.6234654959),
    (1.9825972617, 2.6230084115),
    (1.9823833701, 2.6225600148),
    (1.9821734833, 2.6221200606),
    (1.9819674897, 2.6216883126),
    (1.9817652821, 2.6212645435),
    (1.9815667570, 2.6208485340),
    (1.9813718148, 2.6204400730),
    (1.9811803594, 2.6200389568),
    (1.9809922979, 2.6196449892),
    (1.9808075411, 2.6192579807),
    (1.9806260024, 2.6188777486),
    (1.9804475986, 2.6185041165),
    (1.9802722492, 2.6181369140),
    (1.9800998764, 2.6177759765),
    (1.9799304051, 2.6174211451),
    (1.9797637625, 2.6170722662),
    (1.9795998785, 2.6167291912),
    (1.9794386851, 2.6163917764),
    (1.9792801166, 2.6160598831),
    (1.9791241094, 2.6157333766),
    (1.9789706020, 2.6154121271),
    (1.9788195347, 2.6150960084),
    (1.9786708498, 2.6147848988),
    (1.9785244915, 2.6144786799),
    (1.9783804054, 2.6141772376),
    (1.9782385392, 2.6138804607),
    (1.9780988419, 2.6135882420),
    (1.9779612642, 2.6133004771),
    (1.9778257581, 2.6130170650),
    (1.9776922772, 2.6127379077),
    (1.9775607765, 2.6124629101),
    (1.9774312123, 2.6121919799),
    (1.9773035420, 2.6119250276),
    (1.9771777245, 2.6116619662),
    (1.9770537196, 2.6114027112),
    (1.9769314886, 2.6111471805),
    (1.9768109936, 2.6108952947),
    (1.9766921979, 2.6106469761),
    (1.9765750658, 2.6104021496),
    (1.9764595626, 2.6101607420),
    (1.9763456546, 2.6099226822),
    (1.9762333089, 2.6096879011),
    (1.9761224936, 2.6094563313),
    (1.9760131777, 2.6092279075),
    (1.9759053309, 2.6090025659),
    (1.9757989238, 2.6087802446),
    (1.9756939278, 2.6085608833),
    (1.9755903150, 2.6083444233),
    (1.9754880582, 2.6081308073),
    (1.9753871310, 2.6079199797),
    (1.9752875077, 2.6077118863),
    (1.9751891631, 2.6075064742),
    (1.9750920727, 2.6073036919),
    (1.9749962128, 2.6071034893),
    (1.9749015600, 2.6069058174),
    (1.9748080917, 2.6067106285),
    (1.9747157859, 2.6065178762),
    (1.9746246210, 2.6063275151),
    (1.9745345759, 2.6061395010),
    (1.9744456301, 2.6059537906),
    (1.9743577637, 2.6057703421),
    (1.9742709570, 2.6055891144),
    (1.9741851911, 2.6054100672),
    (1.9741004474, 2.6052331615),
    (1.9740167076, 2.6050583592),
    (1.9739339541, 2.6048856229),
    (1.9738521695, 2.6047149161),
    (1.9737713369, 2.6045462035),
    (1.9736914398, 2.6043794501),
    (1.9736124619, 2.6042146221),
    (1.9735343877, 2.6040516864),
    (1.9734572016, 2.6038906104),
    (1.9733808885, 2.6037313627),
    (1.9733054338, 2.6035739121),
    (1.9732308231, 2.6034182286),
    (1.9731570422, 2.6032642824),
    (1.9730840773, 2.6031120446),
    (1.9730119151, 2.6029614871),
    (1.9729405424, 2.6028125821),
    (1.9728699462, 2.6026653025),
    (1.9728001140, 2.6025196220),
    (1.9727310334, 2.6023755145),
    (1.9726626924, 2.6022329548),
    (1.9725950791, 2.6020919180),
    (1.9725281820, 2.6019523799),
    (1.9724619898, 2.6018143167),
    (1.9723964913, 2.6016777052),
    (1.9723316758, 2.6015425226),
    (1.9722675326, 2.6014087465),
    (1.9722040513, 2.6012763552),
    (1.9721412217, 2.6011453272),
    (1.9720790338, 2.6010156417),
    (1.9720174778, 2.6008872780),
    (1.9719565442, 2.6007602160),
    (1.9718962236, 2.6006344362),
];
