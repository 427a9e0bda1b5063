//! Daubechies taps against values frozen from an independent root-finding
//! computation (numpy polynomial roots of the z-domain half-band product).

use wbnn_core::filter::{make_daubechies, MAX_ORDER};

const FROZEN: [&[f64]; 10] = [
    &[
        7.07106781186547573e-01,
        7.07106781186547573e-01,
    ],
    &[
        4.82962913144534156e-01,
        8.36516303737807831e-01,
        2.24143868042013417e-01,
        -1.29409522551260397e-01,
    ],
    &[
        3.32670552950082854e-01,
        8.06891509311093214e-01,
        4.59877502118491488e-01,
        -1.35011020010255028e-01,
        -8.54412738820268802e-02,
        3.52262918857095472e-02,
    ],
    &[
        2.30377813308896146e-01,
        7.14846570552914784e-01,
        6.30880767929858588e-01,
        -2.79837694168587302e-02,
        -1.87034811719092336e-01,
        3.08413818355607015e-02,
        3.28830116668851133e-02,
        -1.05974017850690005e-02,
    ],
    &[
        1.60102397974194371e-01,
        6.03829269797195090e-01,
        7.24308528437777932e-01,
        1.38428145901318717e-01,
        -2.42294887066388021e-01,
        -3.22448695846412267e-02,
        7.75714938400453025e-02,
        -6.24149021279866816e-03,
        -1.25807519990821723e-02,
        3.33572528547380117e-03,
    ],
    &[
        1.11540743350109231e-01,
        4.94623890398452948e-01,
        7.51133908021097918e-01,
        3.15250351709203347e-01,
        -2.26264693965436220e-01,
        -1.29766867567265964e-01,
        9.75016055873180187e-02,
        2.75228655303038292e-02,
        -3.15820393174861547e-02,
        5.53842201161351927e-04,
        4.77725751094545351e-03,
        -1.07730108530846398e-03,
    ],
    &[
        7.78520540850088372e-02,
        3.96539319481916397e-01,
        7.29132090846236425e-01,
        4.69782287405198951e-01,
        -1.43906003928558790e-01,
        -2.24036184993876897e-01,
        7.13092192668244723e-02,
        8.06126091510808579e-02,
        -3.80299369350147257e-02,
        -1.65745416306679327e-02,
        1.25509985560990373e-02,
        4.29577972921288344e-04,
        -1.80164070404745962e-03,
        3.53713799974511296e-04,
    ],
    &[
        5.44158422431480979e-02,
        3.12871590914537312e-01,
        6.75630736297732071e-01,
        5.85354683654401020e-01,
        -1.58291052567413951e-02,
        -2.84015542962032574e-01,
        4.72484573849681598e-04,
        1.28747426620575200e-01,
        -1.73693010018502042e-02,
        -4.40882539308450477e-02,
        1.39810279174141013e-02,
        8.74609404741455605e-03,
        -4.87035299345682515e-03,
        -3.91740373377223630e-04,
        6.75449406451290001e-04,
        -1.17476784124899124e-04,
    ],
    &[
        3.80779473639101529e-02,
        2.43834674612780994e-01,
        6.04823123690522491e-01,
        6.57288078051575186e-01,
        1.33197385824706999e-01,
        -2.93273783279732858e-01,
        -9.68407832231290011e-02,
        1.48540749338257311e-01,
        3.07256814793455089e-02,
        -6.76328290614076760e-02,
        2.50947114836552331e-04,
        2.23616621237019628e-02,
        -4.72320475775929536e-03,
        -4.28150368246821896e-03,
        1.84764688305850099e-03,
        2.30385763523386792e-04,
        -2.51963188943008442e-04,
        3.93473203163206695e-05,
    ],
    &[
        2.66700579005351365e-02,
        1.88176800077577894e-01,
        5.27201188931551212e-01,
        6.88459039453779176e-01,
        2.81172343661432012e-01,
        -2.49846424326449351e-01,
        -1.95946274377458152e-01,
        1.27369340335074271e-01,
        9.30573646031748747e-02,
        -7.13941471664569227e-02,
        -2.94575368220154309e-02,
        3.32126740591839748e-02,
        3.60655356692683032e-03,
        -1.07331754833226330e-02,
        1.39535174704324646e-03,
        1.99240529518100295e-03,
        -6.85856694957959439e-04,
        -1.16466855129163530e-04,
        9.35886703198614658e-05,
        -1.32642028944877407e-05,
    ],
];

#[test]
fn taps_match_frozen_values() {
    for (i, want) in FROZEN.iter().enumerate() {
        let got = make_daubechies(i + 1).unwrap();
        let got = got.low_pass();
        assert_eq!(got.len(), want.len(), "DB{}", i + 1);
        for (k, (g, w)) in got.iter().zip(want.iter()).enumerate() {
            assert!((g - w).abs() < 1e-10, "DB{} tap {k}: {g} vs {w}", i + 1);
        }
    }
    assert_eq!(MAX_ORDER, FROZEN.len());
}

#[test]
fn db2_closed_form() {
    let s3 = 3f64.sqrt();
    let d = 4.0 * 2f64.sqrt();
    let want = [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d];
    let got = make_daubechies(2).unwrap();
    for (g, w) in got.low_pass().iter().zip(want) {
        assert!((g - w).abs() < 1e-14);
    }
}

#[test]
fn filter_identities() {
    for r in 1..=MAX_ORDER {
        let f = make_daubechies(r).unwrap();
        let h = f.low_pass();
        let g = f.high_pass();
        let sum: f64 = h.iter().sum();
        assert!((sum - 2f64.sqrt()).abs() < 1e-12, "DB{r} sum");
        for shift in (0..h.len()).step_by(2) {
            let dot: f64 = (0..h.len() - shift).map(|k| h[k] * h[k + shift]).sum();
            let want = if shift == 0 { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-12, "DB{r} shift {shift}");
            let cross: f64 = (0..h.len() - shift).map(|k| h[k] * g[k + shift]).sum();
            assert!(cross.abs() < 1e-12, "DB{r} cross shift {shift}");
        }
        // vanishing moments of the high-pass filter, scaled to be comparable across orders
        for m in 0..r {
            let moment: f64 = g.iter().enumerate().map(|(k, gk)| gk * (k as f64).powi(m as i32)).sum();
            let scale: f64 = g.iter().enumerate().map(|(k, gk)| (gk * (k as f64).powi(m as i32)).abs()).sum();
            assert!(moment.abs() < 1e-8 * scale.max(1.0), "DB{r} moment {m}: {moment}");
        }
    }
}

#[test]
fn order_out_of_range() {
    assert!(make_daubechies(0).is_err());
    assert!(make_daubechies(MAX_ORDER + 1).is_err());
}

#[test]
fn scaling_function_integrates_to_one() {
    use wbnn_core::filter::CascadeTable;
    for r in [2, 3, 4, 6] {
        let f = make_daubechies(r).unwrap();
        let table = CascadeTable::new(&f, 12).unwrap();
        let step = 1.0 / (1u64 << 12) as f64;
        let vals = table.scaling_values();
        // trapezoid on the dyadic table; φ vanishes at both support ends
        let integral: f64 = vals.iter().sum::<f64>() * step;
        assert!((integral - 1.0).abs() < 1e-10, "DB{r}: {integral}");
        // partition of unity on the integer translates
        for x in [0.125, 0.3, 0.77] {
            let sum: f64 = (0..f.support_length()).map(|k| table.scaling(x + k as f64)).sum();
            assert!((sum - 1.0).abs() < 1e-6, "DB{r} at {x}: {sum}");
        }
        // ψ has a vanishing integral
        let n = (f.support_length() - 1) << 12;
        let psi: f64 = (0..n).map(|i| table.wavelet((i as f64 + 0.5) * step)).sum::<f64>() * step;
        assert!(psi.abs() < 1e-6, "DB{r}: {psi}");
    }
}
