// Generated by mu_square.py; do not edit.
const POINTS: [[f64; 2]; 20] = [
    [0.9989168798066905, 0.5650438367440969],
    [0.43917466438619956, 0.9048645365273642],
    [0.41860037168793995, 0.891754159465375],
    [0.12504021885932637, 0.17331149182779781],
    [0.8106610381775243, 0.9584123905725315],
    [0.38762532801784455, 0.7829017279859422],
    [0.7358328715232031, 0.5859429621575787],
    [0.472658542091693, 0.6095808093273093],
    [0.34962408022726144, 0.596587442301438],
    [0.7855604206343457, 0.41843438100517283],
    [0.5732023886599681, 0.11784263779972703],
    [0.8418953648899667, 0.3074569941682662],
    [0.3155277027415013, 0.3238932996915457],
    [0.10762140872235049, 0.9599219800515832],
    [0.6712982344044178, 0.01796790113041158],
    [0.3441913618405803, 0.5653288063137049],
    [0.18110143265160095, 0.06243024645989048],
    [0.6080982685041535, 0.7934138736472159],
    [0.2816789377510335, 0.9167495060889861],
    [0.9613081478763416, 0.49453169729110835],
];
// MU_SIGMA_ONE: max change under doubling 6.18e-11
const MU_SIGMA_ONE: [f64; 20] = [
    3.9311516201154046,
    2.2288246510277934,
    2.121184592350126,
    2.2803490629353402,
    2.985411717569391,
    1.5392774396022701,
    1.3654088940443068,
    1.0520711456133056,
    1.1897137789259256,
    1.5233026582386073,
    2.041468556187322,
    1.8743838202561491,
    1.3636791520807483,
    3.113631426040544,
    3.380637199129303,
    1.165011900390509,
    2.734691441165098,
    1.5750292740136638,
    2.4213162219292386,
    2.93677568202188,
];
// MU_DIRICHLET: max change under doubling 3.64e-10
const MU_DIRICHLET: [f64; 20] = [
    426203.1984325399,
    55.71198684001831,
    43.28270996688115,
    40.5669270949134,
    291.6476834096866,
    12.024660676814774,
    8.539089949516802,
    4.547125507899923,
    5.884432560858927,
    12.003504716049514,
    36.629799050232286,
    22.10168567176648,
    8.010964806466998,
    324.2345746099502,
    1548.9430231031045,
    5.676956362238166,
    132.54989841018494,
    13.034478156789417,
    73.67196614664466,
    334.12352471525105,
];
