// 40-digit mpmath values from generate.py.

pub const LOWER: [(f64, f64, f64); 4] = [
    (1.5, 0.5, 0.176_135_867_175_201_053_27),
    (0.3, 2.7, 2.963_764_632_795_665_407_5),
    (4.0, 12.0, 5.986_249_252_753_251_466_6),
    (2.5, 1e-3, 1.264_007_907_432_824_616_4e-8),
];

pub const UPPER: [(f64, f64, f64); 3] = [
    (0.5, 1.3, 0.189_411_003_162_084_960_27),
    (3.5, 0.2, 3.322_475_470_549_102_073_8),
    (1.2, 25.0, 2.664_301_338_453_923_427_9e-11),
];

pub const KUMMER: [(f64, f64); 3] = [
    (-0.25, 1.780_742_740_061_642_870_6),
    (-2.0, 8.780_021_942_968_095_496_2),
    (-1e-4, 1.000_300_004_999_966_667),
];

pub const ERF: [(f64, f64); 2] = [(1.0, 0.842_700_792_949_714_869_34), (0.3, 0.328_626_759_459_127_427_64)];
pub const ERFC: [(f64, f64); 2] = [(2.5, 4.069_520_174_449_589_395_6e-4), (5.0, 1.537_459_794_428_034_850_2e-12)];

pub const HANKEL: [(f64, f64, f64); 10] = [
    (0.2, 1.0, 0.599_894_915_807_493_412_07),
    (0.0, 0.5, 1.078_322_483_541_014_931_4),
    (0.8, 3.0, 0.216_361_522_770_238_540_16),
    (1.2, 0.05, 600.716_361_957_928_386_86),
    (2.5, 7.0, 0.096_854_688_995_293_954_557),
    (3.7, 12.0, 0.055_681_309_066_706_071_728),
    (5.0, 0.4, 581_464_554.642_756_474_36),
    (0.2, 45.0, 0.014_146_373_097_866_589_344),
    (4.3, 31.0, 0.020_733_508_296_631_959_197),
    (0.35, 1e-5, 3_373.408_483_898_438_776),
];

/// (z, λ, δ, J)
pub const JAEGER: [(f64, f64, f64, f64); 5] = [
    (0.01, 0.2, 1.3, 26.318_156_612_188_489_847),
    (1.0, 0.8, 1.0, 1.470_529_802_983_000_865_6),
    (1e-4, 0.0, 1.0, 198.101_379_289_438_008_1),
    (0.3, 1.2, 0.5, 0.829_033_887_963_604_107_33),
    (1e-6, 0.2, 1.3, 2_560.051_677_576_091_260_9),
];
