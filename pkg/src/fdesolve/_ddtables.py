"""Precomputed double-double constants (generated with mpmath at 60 digits)."""

# Taylor coefficients of 1/Gamma(3/2 + u) about u = 0, as (hi, lo) pairs.
# Truncation error on |u| <= 1/2 is below 1e-34.
RGAMMA_TAYLOR = (
    (1.1283791670955126, 1.533545961316588e-17),
    (-0.0411745264452831, -3.3752130157375745e-18),
    (-0.5266544355255445, -6.112036385608127e-18),
    (0.17510202604393457, -1.0657471268514412e-17),
    (0.050966860247706074, 3.1247224718944427e-18),
    (-0.042155169368535604, 3.0976342103734477e-18),
    (0.006612897826824127, 3.573455638859823e-19),
    (0.002120731442572938, 1.3781297975220145e-19),
    (-0.0011107302545948906, -9.753454144222531e-20),
    (0.00015235762076747688, -1.0906520861329338e-20),
    (2.5355204923814165e-05, 4.893956349690275e-22),
    (-1.3896805717913756e-05, 2.1533543121307036e-22),
    (2.1562032905141724e-06, 8.714226745633228e-23),
    (5.7942640540526726e-08, -7.454341938541845e-25),
    (-8.913551118311116e-08, -3.639776989356635e-24),
    (1.7103469415915374e-08, 1.1274857846497739e-25),
    (-9.313686445241901e-10, -3.474969316158858e-26),
    (-2.6804741033496623e-10, -2.3612584194639298e-26),
    (7.458932233316326e-11, 2.4373478754056218e-27),
    (-8.012807061414718e-12, -7.570390468804759e-28),
    (-8.382343033451855e-14, 3.885823863175652e-30),
    (1.6946340904320522e-13, 2.2653509452158334e-30),
    (-2.7875756707125753e-14, 6.524116911441165e-31),
    (1.8670394695065306e-15, -4.254392590878746e-32),
    (1.3049499008587988e-16, -9.270238560188959e-33),
    (-4.8588741441877864e-17, -1.339620604759889e-33),
    (5.829542692459468e-18, -7.523759917630262e-35),
    (-2.592909417993784e-19, 4.8295929078260184e-36),
    (-3.326754010285789e-20, 1.6251345689863235e-36),
    (7.944961635768106e-21, -3.661196591132274e-37),
    (-7.755543288437357e-22, -3.001439691199397e-38),
    (2.5533736291329696e-23, 1.0788765942473458e-40),
    (4.274520160147173e-24, 2.7654689015952895e-40),
    (-8.263381374668449e-25, -2.4845851081041036e-41),
    (7.108187657253398e-26, 7.154417290279865e-43),
    (-2.0749463887704297e-27, 9.526265424997407e-44),
    (-3.2859544069948607e-28, 1.8037039593084174e-44),
)
