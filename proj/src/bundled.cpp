#include "opinionfit/bundled.hpp"

#include <initializer_list>
#include <string>

namespace opinionfit {

namespace {

// Rounded published rows need more renormalization slack than freshly
// constructed parameter sets.
constexpr double kPublishedSlack = 2e-4;

Mat mat7(std::initializer_list<double> vals, int cols = 7) {
    const int rows = static_cast<int>(vals.size()) / cols;
    Mat m(rows, cols);
    int i = 0;
    for (double v : vals) m.data[i++] = v;
    return m;
}

SentimentPanel make_panel() {
    // Observed collective sentiments, seven blogs over twelve 15-day periods.
    Mat values = mat7({
        0.542237, 0.69269,  0.719408, 0.656396, 0.662846, 0.72706,  0.582414, 0.577169, 0.658991, 0.808328, 0.775289, 0.713721,
        0.690464, 0.685991, 0.626356, 0.593513, 0.809609, 0.665289, 0.529654, 0.678874, 0.659458, 0.682581, 0.709356, 0.636683,
        0.640777, 0.601049, 0.617184, 0.593332, 0.643933, 0.648383, 0.601566, 0.568535, 0.610053, 0.552651, 0.600009, 0.499918,
        0.687817, 0.623997, 0.529495, 0.621614, 0.649233, 0.708136, 0.598221, 0.604527, 0.607142, 0.600858, 0.592896, 0.627276,
        0.473992, 0.497273, 0.513026, 0.506612, 0.546008, 0.594167, 0.523988, 0.545223, 0.571942, 0.573838, 0.484829, 0.561077,
        0.740787, 0.669839, 0.666616, 0.742431, 0.571651, 0.73716,  0.655859, 0.636605, 0.669664, 0.710904, 0.679262, 0.784448,
        0.551033, 0.557094, 0.537976, 0.49017,  0.632734, 0.766128, 0.574511, 0.653399, 0.694449, 0.679584, 0.680478, 0.708864,
    }, 12);
    std::vector<std::string> blogs, periods;
    for (int b = 1; b <= 7; ++b) blogs.push_back("blog" + std::to_string(b));
    for (int t = 1; t <= 12; ++t) periods.push_back("p" + std::to_string(t));
    return validate_panel(std::move(values), std::move(blogs), std::move(periods));
}

void add_single(BundledDataset& d, ModelFamily fam, int lag, Mat W, Vec S = {}, Vec z = {}) {
    ParamSet p;
    p.W = std::move(W);
    p.S = std::move(S);
    p.z = std::move(z);
    d.reference_params[{fam, lag}] =
        make_params(ModelSpec{fam, lag}, std::move(p), kPublishedSlack, kPublishedSlack, false);
}

void add_two_layer(BundledDataset& d, ModelFamily fam, int lag, Mat W, Mat A, Vec D, Vec Phi,
                   Vec S = {}, Vec z = {}) {
    ParamSet p;
    p.W = std::move(W);
    p.A = std::move(A);
    p.D = std::move(D);
    p.Phi = std::move(Phi);
    p.S = std::move(S);
    p.z = std::move(z);
    d.reference_params[{fam, lag}] =
        make_params(ModelSpec{fam, lag}, std::move(p), kPublishedSlack, kPublishedSlack, false);
}

BundledDataset build() {
    BundledDataset d;
    d.panel = make_panel();

    add_single(d, ModelFamily::FDG, 0,
               mat7({
                   0.0244, 0.6763, 0,      0,      0,      0.2993, 0,
                   0,      0.1924, 0.0989, 0,      0.0589, 0.6498, 0,
                   0,      0.2177, 0.3311, 0,      0.3025, 0.1487, 0,
                   0,      0.1601, 0.7622, 0,      0.0777, 0,      0,
                   0,      0.1097, 0,      0,      0.8903, 0,      0,
                   0.2813, 0.5685, 0,      0,      0,      0.1502, 0,
                   0,      0.4987, 0,      0.0847, 0.3206, 0,      0.0960,
               }));

    add_single(d, ModelFamily::FJ, 0,
               mat7({
                   0,      1,      0,      0,      0,      0,      0,
                   0.1268, 0.1422, 0.1493, 0.1554, 0.1422, 0.1756, 0.1085,
                   0.1051, 0.6610, 0,      0.0029, 0,      0.2310, 0,
                   0,      0.2920, 0.6933, 0,      0.0147, 0,      0,
                   0,      0.2000, 0,      0,      0.8000, 0,      0,
                   0.1731, 0.4940, 0.2603, 0,      0,      0,      0.0726,
                   0,      0.3311, 0,      0,      0.6689, 0,      0,
               }),
               {0.4861, 0, 0.3347, 0.5676, 0.5509, 0.6756, 0.8905},
               {0.6915, 0.6590, 0.5748, 0.6026, 0.5231, 0.7394, 1});

    add_single(d, ModelFamily::FDGM, 1,
               mat7({
                   0,      0.6813, 0,      0,      0,      0.3187, 0,
                   0,      0.1823, 0.1652, 0,      0,      0.6525, 0,
                   0,      0.5703, 0,      0,      0.4297, 0,      0,
                   0,      0.1496, 0.8176, 0,      0.0328, 0,      0,
                   0,      0.7676, 0,      0,      0.2324, 0,      0,
                   0.4277, 0.3967, 0,      0,      0,      0,      0.1756,
                   0,      0.9052, 0,      0.0246, 0.0702, 0,      0,
               }),
               {1, 1, 0.4229, 1, 0.2877, 0.6648, 0.6756});

    add_single(d, ModelFamily::FDGM, 2,
               mat7({
                   0,      0.6753, 0,      0,      0,      0.3247, 0,
                   0,      0.3628, 0,      0,      0,      0.6372, 0,
                   0,      0.2109, 0.1405, 0.3481, 0.3004, 0,      0,
                   0,      0.3239, 0.6637, 0,      0,      0.0124, 0,
                   0,      0.4657, 0.4326, 0,      0.1017, 0,      0,
                   0.3881, 0.5609, 0.0510, 0,      0,      0,      0,
                   0,      0.7242, 0,      0.2758, 0,      0,      0,
               }),
               {1, 0.5977, 0.5596, 0.9146, 0.3260, 0.7275, 0.7103});

    add_two_layer(d, ModelFamily::EPO, 0,
                  mat7({
                      0,      1,      0,      0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0,      0.5705, 0.0789, 0,      0,      0.3506, 0,
                      0,      0.2846, 0.7049, 0.0106, 0,      0,      0,
                      0,      0,      0,      0,      1,      0,      0,
                      0.1731, 0.494,  0.2603, 0,      0,      0,      0.0726,
                      0,      0,      0,      0,      0,      0,      1,
                  }),
                  mat7({
                      0,      1,      0,      0,      0,      0,      0,
                      0.1383, 0,      0.174,  0.1834, 0.1646, 0.2294, 0.1102,
                      0,      0.6193, 0,      0,      0,      0.3807, 0,
                      0,      0.2876, 0.7124, 0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0.1731, 0.494,  0.2603, 0,      0,      0,      0.0726,
                      0,      1,      0,      0,      0,      0,      0,
                  }),
                  {0, 1, 0.0789, 0.0106, 1, 0, 1},
                  {1, 1, 1, 1, 0.8158, 1, 0.6261},
                  {0.4861, 0.0288, 0.4628, 0.5802, 0.7539, 0.6756, 0.8456},
                  {0.6915, 0.6579, 0.5591, 0.6016, 0.5614, 0.7394, 0.8018});

    add_two_layer(d, ModelFamily::REPO, 0,
                  mat7({
                      0.0160, 0.6758, 0,      0,      0,      0.3082, 0,
                      0,      0.4091, 0,      0,      0.0211, 0.5698, 0,
                      0,      0,      1,      0,      0,      0,      0,
                      0,      0.1506, 0.7827, 0.0206, 0.0461, 0,      0,
                      0,      0.0729, 0,      0,      0.9271, 0,      0,
                      0,      0.5585, 0,      0,      0,      0.4415, 0,
                      0,      0.3336, 0,      0,      0,      0,      0.6664,
                  }),
                  mat7({
                      0, 0.6868, 0,      0, 0,      0.3132, 0,
                      0, 0,      0,      0, 0.0356, 0.9644, 0,
                      0, 1,      0,      0, 0,      0,      0,
                      0, 0.1537, 0.7992, 0, 0.0471, 0,      0,
                      0, 1,      0,      0, 0,      0,      0,
                      0, 1,      0,      0, 0,      0,      0,
                      0, 1,      0,      0, 0,      0,      0,
                  }),
                  {0.0160, 0.4091, 1, 0.0206, 0.9271, 0.4415, 0.6664},
                  {1, 1, 0.8629, 1, 0.8510, 1, 1});

    add_two_layer(d, ModelFamily::EPO, 1,
                  mat7({
                      0.1271, 0.8729, 0,      0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0,      0.6043, 0.0114, 0,      0,      0.3843, 0,
                      0,      0.6015, 0.03,   0.3686, 0,      0,      0,
                      0,      0.6948, 0,      0,      0.3052, 0,      0,
                      0.13,   0.51,   0.3027, 0,      0,      0.0217, 0.0356,
                      0,      0,      0,      0,      0,      0,      1,
                  }),
                  mat7({
                      0,      1,      0,      0,      0,      0,      0,
                      0.1759, 0,      0.1746, 0.1616, 0.1743, 0.1797, 0.1339,
                      0,      0.6113, 0,      0,      0,      0.3887, 0,
                      0,      0.9525, 0.0475, 0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0.1329, 0.5213, 0.3094, 0,      0,      0,      0.0363,
                      0,      0,      0,      0,      0,      1,      0,
                  }),
                  {0.1271, 1, 0.0114, 0.3686, 0.3052, 0.0217, 1},
                  {1, 1, 1, 1, 1, 1, 0.4507},
                  {0.5294, 0.0408, 0.4494, 0.4326, 0.2815, 0.6997, 0.6546},
                  {0.687, 0.6593, 0.5583, 0.6178, 0.5255, 0.7534, 0.7391});

    add_two_layer(d, ModelFamily::EPO, 2,
                  mat7({
                      0,      1,      0,      0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0,      0,      1,      0,      0,      0,      0,
                      0.1640, 0.8323, 0,      0.0037, 0,      0,      0,
                      0,      0.6936, 0,      0,      0.3064, 0,      0,
                      0,      0.5321, 0,      0,      0,      0.2784, 0.1895,
                      0,      0.6193, 0,      0,      0,      0,      0.3807,
                  }),
                  mat7({
                      0,      1,      0,      0,      0,      0,      0,
                      0.1767, 0,      0.1766, 0.1659, 0.1665, 0.1865, 0.1278,
                      0.8348, 0,      0,      0,      0,      0.1652, 0,
                      0.1646, 0.8354, 0,      0,      0,      0,      0,
                      0,      1,      0,      0,      0,      0,      0,
                      0,      0.7374, 0,      0,      0,      0,      0.2626,
                      0,      1,      0,      0,      0,      0,      0,
                  }),
                  {0, 1, 1, 0.0037, 0.3064, 0.2784, 0.380772},
                  {1, 1, 0.4858, 0.7465, 0.9771, 1, 1},
                  {0.4613, 0.0791, 0.8052, 0.6506, 0.2726, 0.8619, 0.5673},
                  {0.6811, 0.6682, 0.4374, 0.5521, 0.5319, 0.7374, 0.6821});

    add_two_layer(d, ModelFamily::REPO, 1,
                  mat7({
                      0.0943, 0.6390, 0,      0,      0,      0.2667, 0,
                      0,      0.3622, 0,      0,      0,      0.6378, 0,
                      0,      0,      1,      0,      0,      0,      0,
                      0,      0.2634, 0.5478, 0.1508, 0,      0.0380, 0,
                      0,      0.0893, 0,      0,      0.9107, 0,      0,
                      0,      0.5562, 0,      0,      0,      0.4438, 0,
                      0,      0.5040, 0,      0.3012, 0,      0,      0.1948,
                  }),
                  mat7({
                      0,      0.7056, 0,      0,      0,      0.2944, 0,
                      0,      0,      0,      0,      0,      1,      0,
                      0.1648, 0.1537, 0,      0.1673, 0.2361, 0.1734, 0.1047,
                      0,      0.3102, 0.6450, 0,      0,      0.0447, 0,
                      0,      0.9998, 0.0001, 0,      0,      0.0001, 0,
                      0.0001, 0.9999, 0,      0,      0,      0,      0,
                      0,      0.6259, 0,      0.3741, 0,      0,      0,
                  }),
                  {0.0943, 0.3622, 1, 0.1508, 0.9107, 0.4437, 0.1949},
                  {1, 0.8170, 1, 1, 1, 1, 1});

    add_two_layer(d, ModelFamily::REPO, 2,
                  mat7({
                      0.0258, 0.6680, 0,      0,      0,      0.3062, 0,
                      0,      0.3678, 0,      0,      0,      0.6322, 0,
                      0.1718, 0,      0.6286, 0,      0.1996, 0,      0,
                      0,      0.4676, 0.5166, 0.0155, 0.0003, 0,      0,
                      0.0495, 0,      0,      0,      0.9505, 0,      0,
                      0,      0.5212, 0,      0,      0,      0.3034, 0.1754,
                      0,      0.7728, 0,      0,      0,      0,      0.2272,
                  }),
                  mat7({
                      0,      0.6857, 0,      0,      0,      0.3143, 0,
                      0,      0,      0,      0,      0,      1,      0,
                      0.4626, 0,      0,      0,      0.5374, 0,      0,
                      0,      0.4750, 0.5247, 0,      0.0003, 0,      0,
                      0.9997, 0,      0.0001, 0,      0,      0,      0.0002,
                      0,      0.7483, 0,      0,      0,      0,      0.2517,
                      0,      1,      0,      0,      0,      0,      0,
                  }),
                  {0.0258, 0.3678, 0.6286, 0.0155, 0.9505, 0.3034, 0.2272},
                  {1, 1, 0.4608, 0.7261, 0.7869, 0.9998, 0.8164});

    auto metrics = [&](ModelFamily f, int lag, double sr, double mae, double mape,
                       double rin, double r11, double r12, double rout) {
        d.reference_metrics[{f, lag}] = ReferenceMetrics{sr, mae, mape, rin, r11, r12, rout};
    };
    metrics(ModelFamily::FDG, 0, 0.2000, 0.1308, 7.7957, 0.1461, 0.1463, 0.1927, 0.1711);
    metrics(ModelFamily::FJ, 0, 0.1647, 0.1257, 7.5226, 0.1401, 0.1330, 0.1704, 0.1529);
    metrics(ModelFamily::EPO, 0, 0.0773, 0.1129, 6.7539, 0.1319, 0.1422, 0.1563, 0.1494);
    metrics(ModelFamily::REPO, 0, 0.0879, 0.1161, 6.9463, 0.1347, 0.1346, 0.1457, 0.1402);
    metrics(ModelFamily::FDGM, 1, 0.1754, 0.1219, 7.2959, 0.1423, 0.1496, 0.1512, 0.1504);
    metrics(ModelFamily::FDGM, 2, 0.1412, 0.0987, 5.8621, 0.1242, 0.1238, 0.1641, 0.1454);
    metrics(ModelFamily::EPO, 1, 0.0681, 0.1222, 7.3173, 0.1411, 0.1335, 0.1559, 0.1451);
    metrics(ModelFamily::REPO, 1, 0.0783, 0.1277, 7.6704, 0.1434, 0.1347, 0.1476, 0.1413);
    metrics(ModelFamily::EPO, 2, 0.0530, 0.0883, 5.2564, 0.1154, 0.1584, 0.1340, 0.1467);
    metrics(ModelFamily::REPO, 2, 0.0639, 0.0854, 5.0497, 0.1114, 0.1208, 0.1641, 0.1441);

    // Published two-period-ahead reduced-EPO forecasts for periods 11 and 12.
    d.reference_forecasts = mat7({
        0.692155, 0.689703,
        0.69206,  0.685445,
        0.577721, 0.579021,
        0.574334, 0.5952,
        0.584956, 0.594069,
        0.684408, 0.688682,
        0.677213, 0.682164,
    }, 2);

    return d;
}

}  // namespace

const BundledDataset& bundled() {
    static const BundledDataset d = build();
    return d;
}

}  // namespace opinionfit
