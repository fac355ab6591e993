//! Values printed in the published tables, as percentages or integers.
//! Comma decimals and thousands separators are normalized.

pub const COVERAGE_NORMAL: [[f64; 5]; 7] = [
    [24.82, 12.56, 6.30, 2.52, 1.26],
    [52.05, 27.63, 14.03, 5.64, 2.82],
    [68.27, 38.29, 19.74, 7.97, 3.99],
    [97.47, 73.64, 42.38, 17.69, 8.90],
    [99.84, 88.62, 57.08, 24.82, 12.56],
    [100.00, 99.96, 92.29, 52.05, 27.63],
    [100.00, 100.00, 98.76, 68.27, 38.29],
];

pub const COVERAGE_UNIFORM: [[f64; 5]; 7] = [
    [41.61, 21.58, 10.89, 4.37, 2.18],
    [77.93, 45.97, 24.05, 9.75, 4.88],
    [91.67, 61.35, 33.50, 13.75, 6.90],
    [99.99, 94.72, 66.71, 30.15, 15.35],
    [100.00, 99.38, 82.91, 41.61, 21.58],
    [100.00, 100.00, 99.78, 77.93, 45.97],
    [100.00, 100.00, 100.00, 91.67, 61.35],
];

pub const CRITERION_NORMAL: [[u64; 5]; 7] = [
    [18, 41, 164, 657, 16424],
    [30, 68, 271, 1082, 27055],
    [43, 96, 384, 1537, 38415],
    [56, 126, 502, 2010, 50239],
    [74, 166, 663, 2654, 66349],
    [88, 197, 788, 3152, 78794],
    [168, 378, 1514, 6055, 151367],
];

pub const CRITERION_UNIFORM: [[u64; 5]; 7] = [
    [6, 14, 55, 219, 5475],
    [8, 17, 69, 276, 6908],
    [10, 23, 90, 361, 9018],
    [14, 32, 128, 512, 12805],
    [19, 42, 167, 670, 16746],
    [25, 55, 221, 885, 22116],
    [56, 126, 505, 2018, 50456],
];

pub const LINEAR_N22: [[f64; 5]; 7] = [
    [367.0, 157.0, 40.0, 10.0, 0.0],
    [275.0, 129.0, 32.0, 8.0, 0.0],
    [220.0, 96.0, 24.0, 6.0, 0.0],
    [157.0, 69.0, 17.0, 4.0, 0.0],
    [116.0, 52.0, 13.0, 3.0, 0.0],
    [88.0, 40.0, 10.0, 2.0, 0.0],
    [39.0, 17.0, 4.0, 1.0, 0.0],
];

pub const LINEAR_N11: [[f64; 5]; 7] = [
    [183.0, 79.0, 20.0, 5.0, 0.0],
    [138.0, 65.0, 16.0, 4.0, 0.0],
    [110.0, 48.0, 12.0, 3.0, 0.0],
    [79.0, 34.0, 9.0, 2.0, 0.0],
    [58.0, 26.0, 7.0, 2.0, 0.0],
    [44.0, 20.0, 5.0, 1.0, 0.0],
    [20.0, 9.0, 2.0, 1.0, 0.0],
];

pub const LINEAR_N6: [[f64; 5]; 7] = [
    [100.0, 43.0, 11.0, 3.0, 0.0],
    [75.0, 35.0, 9.0, 2.0, 0.0],
    [60.0, 26.0, 7.0, 2.0, 0.0],
    [43.0, 19.0, 5.0, 1.0, 0.0],
    [32.0, 14.0, 4.0, 1.0, 0.0],
    [24.0, 11.0, 3.0, 1.0, 0.0],
    [11.0, 5.0, 1.0, 0.0, 0.0],
];

pub const LINEAR_N5: [[f64; 5]; 7] = [
    [83.0, 36.0, 9.0, 2.0, 0.0],
    [63.0, 29.0, 7.0, 2.0, 0.0],
    [50.0, 22.0, 6.0, 1.0, 0.0],
    [36.0, 16.0, 4.0, 1.0, 0.0],
    [26.0, 12.0, 3.0, 1.0, 0.0],
    [20.0, 9.0, 2.0, 1.0, 0.0],
    [9.0, 4.0, 1.0, 0.0, 0.0],
];

pub const LONGLEY_COOK_N136: [[f64; 5]; 7] = [
    [128.0, 126.0, 116.0, 88.0, 10.0],
    [128.0, 125.0, 113.0, 81.0, 8.0],
    [127.0, 124.0, 108.0, 72.0, 6.0],
    [126.0, 121.0, 101.0, 61.0, 4.0],
    [125.0, 119.0, 95.0, 52.0, 3.0],
    [123.0, 116.0, 87.0, 44.0, 3.0],
    [116.0, 102.0, 61.0, 24.0, 1.0],
];

pub const LONGLEY_COOK_N45: [[f64; 5]; 7] = [
    [125.0, 119.0, 95.0, 53.0, 3.5],
    [123.0, 117.0, 89.0, 46.0, 2.8],
    [122.0, 113.0, 81.0, 38.0, 2.1],
    [119.0, 107.0, 70.0, 29.0, 1.5],
    [115.0, 102.0, 62.0, 24.0, 1.2],
    [111.0, 95.0, 53.0, 19.0, 0.9],
    [95.0, 71.0, 30.0, 9.0, 0.4],
];

pub const LONGLEY_COOK_N22: [[f64; 5]; 7] = [
    [120.0, 109.0, 74.0, 33.0, 2.0],
    [117.0, 106.0, 67.0, 27.0, 1.0],
    [114.0, 99.0, 58.0, 22.0, 1.0],
    [109.0, 91.0, 47.0, 16.0, 1.0],
    [103.0, 83.0, 40.0, 13.0, 1.0],
    [97.0, 74.0, 32.0, 10.0, 0.0],
    [74.0, 48.0, 16.0, 5.0, 0.0],
];

pub const LONGLEY_COOK_N11: [[f64; 5]; 7] = [
    [112.0, 94.0, 52.0, 19.0, 0.9],
    [107.0, 89.0, 45.0, 15.0, 0.7],
    [102.0, 80.0, 38.0, 12.0, 0.5],
    [94.0, 69.0, 29.0, 9.0, 0.4],
    [86.0, 61.0, 23.0, 7.0, 0.3],
    [77.0, 52.0, 18.0, 5.0, 0.2],
    [51.0, 29.0, 9.0, 2.0, 0.1],
];

pub const LONGLEY_COOK_N6: [[f64; 5]; 7] = [
    [100.0, 76.0, 35.0, 11.0, 0.0],
    [93.0, 70.0, 29.0, 9.0, 0.0],
    [87.0, 60.0, 24.0, 7.0, 0.0],
    [76.0, 50.0, 18.0, 5.0, 0.0],
    [67.0, 42.0, 14.0, 4.0, 0.0],
    [58.0, 35.0, 11.0, 3.0, 0.0],
    [34.0, 18.0, 5.0, 1.0, 0.0],
];

pub const LONGLEY_COOK_N5: [[f64; 5]; 7] = [
    [96.0, 71.0, 30.0, 9.0, 0.0],
    [88.0, 64.0, 25.0, 7.0, 0.0],
    [81.0, 55.0, 20.0, 6.0, 0.0],
    [71.0, 45.0, 15.0, 4.0, 0.0],
    [61.0, 37.0, 12.0, 3.0, 0.0],
    [52.0, 30.0, 9.0, 2.0, 0.0],
    [30.0, 15.0, 4.0, 1.0, 0.0],
];

pub const RISK_FACTORS: [&str; 11] = [
    "ZEROEUR",
    "ZEROEUR-06M",
    "ZEROEUR-12M",
    "ZEROEUR-24M",
    "ZEROEUR-03Y",
    "ZEROEUR-05Y",
    "ZEROEUR-10Y",
    "ZEROEUR-15Y",
    "ZEROEUR-20Y",
    "ZEROEUR-30Y",
    "ZEROEUR-50Y",
];

pub const HORIZONS: [&str; 7] = ["2w", "1m", "3m", "6m", "1y", "18m", "2y"];

pub const ADJUSTED_LINEAR: [[f64; 7]; 11] = [
    [0.2, 3.3, 1.0, 2.4, 0.6, 0.1, 0.1],
    [11.0, 0.5, 4.7, 0.6, 1.2, 0.0, 0.0],
    [3.4, 0.3, 1.3, 0.4, 0.8, 0.1, 0.1],
    [6.9, 0.5, 1.0, 0.4, 1.2, 0.6, 0.7],
    [4.4, 0.4, 0.8, 0.3, 1.1, 0.8, 0.6],
    [4.3, 0.3, 0.6, 0.6, 1.1, 0.8, 0.7],
    [4.2, 0.7, 0.6, 0.8, 1.0, 0.5, 0.5],
    [6.0, 2.8, 2.2, 2.7, 2.0, 0.6, 0.6],
    [10.4, 4.4, 3.7, 4.0, 3.4, 0.7, 0.8],
    [5.5, 9.3, 6.4, 2.6, 4.5, 0.5, 1.0],
    [12.3, 7.3, 11.9, 0.6, 4.4, 0.3, 1.6],
];

pub const ADJUSTED_LONGLEY_COOK: [[f64; 7]; 11] = [
    [0.2, 3.3, 1.7, 5.8, 1.7, 0.4, 0.5],
    [11.0, 0.5, 7.6, 1.4, 3.7, 0.1, 0.2],
    [3.4, 0.3, 2.2, 1.0, 2.4, 0.2, 0.2],
    [6.9, 0.5, 1.6, 0.9, 3.7, 2.2, 2.5],
    [4.4, 0.4, 1.4, 0.8, 3.3, 2.8, 2.3],
    [4.3, 0.3, 1.1, 1.5, 3.4, 2.9, 2.5],
    [4.2, 0.7, 1.1, 1.8, 3.2, 1.7, 1.7],
    [6.0, 2.8, 3.6, 6.4, 6.2, 2.2, 2.1],
    [10.4, 4.4, 6.0, 9.4, 10.4, 2.6, 3.0],
    [5.5, 9.3, 10.5, 6.2, 13.9, 1.8, 3.8],
    [12.3, 7.3, 19.4, 1.4, 13.5, 1.2, 5.8],
];

pub const Z_ROW_LINEAR: [f64; 7] = [100.0, 100.0, 50.0, 24.0, 12.0, 7.0, 6.0];

pub const Z_ROW_LONGLEY_COOK: [f64; 7] = [100.0, 100.0, 81.0, 58.0, 38.0, 24.0, 20.0];
