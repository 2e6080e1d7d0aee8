#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace growthlab {

// Adaptive eighth-order Dormand-Prince integrator (DOP853) with the
// classical seventh-order dense output, after Hairer, Norsett and Wanner,
// "Solving Ordinary Differential Equations I".
namespace dop853_detail {
inline constexpr double c2 = 0.526001519587677318785587544488e-1;
inline constexpr double c3 = 0.789002279381515978178381316732e-1;
inline constexpr double c4 = 0.118350341907227396726757197510e+0;
inline constexpr double c5 = 0.281649658092772603273242802490e+0;
inline constexpr double c6 = 0.333333333333333333333333333333e+0;
inline constexpr double c7 = 0.25e+0;
inline constexpr double c8 = 0.307692307692307692307692307692e+0;
inline constexpr double c9 = 0.651282051282051282051282051282e+0;
inline constexpr double c10 = 0.6e+0;
inline constexpr double c11 = 0.857142857142857142857142857142e+0;
inline constexpr double c14 = 0.1e+0;
inline constexpr double c15 = 0.2e+0;
inline constexpr double c16 = 0.777777777777777777777777777778e+0;

inline constexpr double b1 = 5.42937341165687622380535766363e-2;
inline constexpr double b6 = 4.45031289275240888144113950566e0;
inline constexpr double b7 = 1.89151789931450038304281599044e0;
inline constexpr double b8 = -5.8012039600105847814672114227e0;
inline constexpr double b9 = 3.1116436695781989440891606237e-1;
inline constexpr double b10 = -1.52160949662516078556178806805e-1;
inline constexpr double b11 = 2.01365400804030348374776537501e-1;
inline constexpr double b12 = 4.47106157277725905176885569043e-2;

inline constexpr double bhh1 = 0.244094488188976377952755905512e+0;
inline constexpr double bhh2 = 0.733846688281611857341361741547e+0;
inline constexpr double bhh3 = 0.220588235294117647058823529412e-1;

inline constexpr double er1 = 0.1312004499419488073250102996e-1;
inline constexpr double er6 = -0.1225156446376204440720569753e+1;
inline constexpr double er7 = -0.4957589496572501915214079952e+0;
inline constexpr double er8 = 0.1664377182454986536961530415e+1;
inline constexpr double er9 = -0.3503288487499736816886487290e+0;
inline constexpr double er10 = 0.3341791187130174790297318841e+0;
inline constexpr double er11 = 0.8192320648511571246570742613e-1;
inline constexpr double er12 = -0.2235530786388629525884427845e-1;

inline constexpr double a21 = 5.26001519587677318785587544488e-2;
inline constexpr double a31 = 1.97250569845378994544595329183e-2;
inline constexpr double a32 = 5.91751709536136983633785987549e-2;
inline constexpr double a41 = 2.95875854768068491816892993775e-2;
inline constexpr double a43 = 8.87627564304205475450678981324e-2;
inline constexpr double a51 = 2.41365134159266685502369798665e-1;
inline constexpr double a53 = -8.84549479328286085344864962717e-1;
inline constexpr double a54 = 9.24834003261792003115737966543e-1;
inline constexpr double a61 = 3.7037037037037037037037037037e-2;
inline constexpr double a64 = 1.70828608729473871279604482173e-1;
inline constexpr double a65 = 1.25467687566822425016691814123e-1;
inline constexpr double a71 = 3.7109375e-2;
inline constexpr double a74 = 1.70252211019544039314978060272e-1;
inline constexpr double a75 = 6.02165389804559606850219397283e-2;
inline constexpr double a76 = -1.7578125e-2;
inline constexpr double a81 = 3.70920001185047927108779319836e-2;
inline constexpr double a84 = 1.70383925712239993810214054705e-1;
inline constexpr double a85 = 1.07262030446373284651809199168e-1;
inline constexpr double a86 = -1.53194377486244017527936158236e-2;
inline constexpr double a87 = 8.27378916381402288758473766002e-3;
inline constexpr double a91 = 6.24110958716075717114429577812e-1;
inline constexpr double a94 = -3.36089262944694129406857109825e0;
inline constexpr double a95 = -8.68219346841726006818189891453e-1;
inline constexpr double a96 = 2.75920996994467083049415600797e1;
inline constexpr double a97 = 2.01540675504778934086186788979e1;
inline constexpr double a98 = -4.34898841810699588477366255144e1;
inline constexpr double a101 = 4.77662536438264365890433908527e-1;
inline constexpr double a104 = -2.48811461997166764192642586468e0;
inline constexpr double a105 = -5.90290826836842996371446475743e-1;
inline constexpr double a106 = 2.12300514481811942347288949897e1;
inline constexpr double a107 = 1.52792336328824235832596922938e1;
inline constexpr double a108 = -3.32882109689848629194453265587e1;
inline constexpr double a109 = -2.03312017085086261358222928593e-2;
inline constexpr double a111 = -9.3714243008598732571704021658e-1;
inline constexpr double a114 = 5.18637242884406370830023853209e0;
inline constexpr double a115 = 1.09143734899672957818500254654e0;
inline constexpr double a116 = -8.14978701074692612513997267357e0;
inline constexpr double a117 = -1.85200656599969598641566180701e1;
inline constexpr double a118 = 2.27394870993505042818970056734e1;
inline constexpr double a119 = 2.49360555267965238987089396762e0;
inline constexpr double a1110 = -3.0467644718982195003823669022e0;
inline constexpr double a121 = 2.27331014751653820792359768449e0;
inline constexpr double a124 = -1.05344954667372501984066689879e1;
inline constexpr double a125 = -2.00087205822486249909675718444e0;
inline constexpr double a126 = -1.79589318631187989172765950534e1;
inline constexpr double a127 = 2.79488845294199600508499808837e1;
inline constexpr double a128 = -2.85899827713502369474065508674e0;
inline constexpr double a129 = -8.87285693353062954433549289258e0;
inline constexpr double a1210 = 1.23605671757943030647266201528e1;
inline constexpr double a1211 = 6.43392746015763530355970484046e-1;

inline constexpr double a141 = 5.61675022830479523392909219681e-2;
inline constexpr double a147 = 2.53500210216624811088794765333e-1;
inline constexpr double a148 = -2.46239037470802489917441475441e-1;
inline constexpr double a149 = -1.24191423263816360469010140626e-1;
inline constexpr double a1410 = 1.5329179827876569731206322685e-1;
inline constexpr double a1411 = 8.20105229563468988491666602057e-3;
inline constexpr double a1412 = 7.56789766054569976138603589584e-3;
inline constexpr double a1413 = -8.298e-3;
inline constexpr double a151 = 3.18346481635021405060768473261e-2;
inline constexpr double a156 = 2.83009096723667755288322961402e-2;
inline constexpr double a157 = 5.35419883074385676223797384372e-2;
inline constexpr double a158 = -5.49237485713909884646569340306e-2;
inline constexpr double a1511 = -1.08347328697249322858509316994e-4;
inline constexpr double a1512 = 3.82571090835658412954920192323e-4;
inline constexpr double a1513 = -3.40465008687404560802977114492e-4;
inline constexpr double a1514 = 1.41312443674632500278074618366e-1;
inline constexpr double a161 = -4.28896301583791923408573538692e-1;
inline constexpr double a166 = -4.69762141536116384314449447206e0;
inline constexpr double a167 = 7.68342119606259904184240953878e0;
inline constexpr double a168 = 4.06898981839711007970213554331e0;
inline constexpr double a169 = 3.56727187455281109270669543021e-1;
inline constexpr double a1613 = -1.39902416515901462129418009734e-3;
inline constexpr double a1614 = 2.9475147891527723389556272149e0;
inline constexpr double a1615 = -9.15095847217987001081870187138e0;

inline constexpr double d41 = -0.84289382761090128651353491142e+1;
inline constexpr double d46 = 0.56671495351937776962531783590e+0;
inline constexpr double d47 = -0.30689499459498916912797304727e+1;
inline constexpr double d48 = 0.23846676565120698287728149680e+1;
inline constexpr double d49 = 0.21170345824450282767155149946e+1;
inline constexpr double d410 = -0.87139158377797299206789907490e+0;
inline constexpr double d411 = 0.22404374302607882758541771650e+1;
inline constexpr double d412 = 0.63157877876946881815570249290e+0;
inline constexpr double d413 = -0.88990336451333310820698117400e-1;
inline constexpr double d414 = 0.18148505520854727256656404962e+2;
inline constexpr double d415 = -0.91946323924783554000451984436e+1;
inline constexpr double d416 = -0.44360363875948939664310572000e+1;
inline constexpr double d51 = 0.10427508642579134603413151009e+2;
inline constexpr double d56 = 0.24228349177525818288430175319e+3;
inline constexpr double d57 = 0.16520045171727028198505394887e+3;
inline constexpr double d58 = -0.37454675472269020279518312152e+3;
inline constexpr double d59 = -0.22113666853125306036270938578e+2;
inline constexpr double d510 = 0.77334326684722638389603898808e+1;
inline constexpr double d511 = -0.30674084731089398182061213626e+2;
inline constexpr double d512 = -0.93321305264302278729567221706e+1;
inline constexpr double d513 = 0.15697238121770843886131091075e+2;
inline constexpr double d514 = -0.31139403219565177677282850411e+2;
inline constexpr double d515 = -0.93529243588444783865713862664e+1;
inline constexpr double d516 = 0.35816841486394083752465898540e+2;
inline constexpr double d61 = 0.19985053242002433820987653617e+2;
inline constexpr double d66 = -0.38703730874935176555105901742e+3;
inline constexpr double d67 = -0.18917813819516756882830838328e+3;
inline constexpr double d68 = 0.52780815920542364900561016686e+3;
inline constexpr double d69 = -0.11573902539959630126141871134e+2;
inline constexpr double d610 = 0.68812326946963000169666922661e+1;
inline constexpr double d611 = -0.10006050966910838403183860980e+1;
inline constexpr double d612 = 0.77771377980534432092869265740e+0;
inline constexpr double d613 = -0.27782057523535084065932004339e+1;
inline constexpr double d614 = -0.60196695231264120758267380846e+2;
inline constexpr double d615 = 0.84320405506677161018159903784e+2;
inline constexpr double d616 = 0.11992291136182789328035130030e+2;
inline constexpr double d71 = -0.25693933462703749003312586129e+2;
inline constexpr double d76 = -0.15418974869023643374053993627e+3;
inline constexpr double d77 = -0.23152937917604549567536039109e+3;
inline constexpr double d78 = 0.35763911791061412378285349910e+3;
inline constexpr double d79 = 0.93405324183624310003907691704e+2;
inline constexpr double d710 = -0.37458323136451633156875139351e+2;
inline constexpr double d711 = 0.10409964950896230045147246184e+3;
inline constexpr double d712 = 0.29840293426660503123344363579e+2;
inline constexpr double d713 = -0.43533456590011143754432175058e+2;
inline constexpr double d714 = 0.96324553959188282948394950600e+2;
inline constexpr double d715 = -0.39177261675615439165231486172e+2;
inline constexpr double d716 = -0.14972683625798562581422125276e+3;
}  // namespace dop853_detail

template <int N>
class Dop853 {
public:
    using State = Eigen::Matrix<double, N, 1>;
    using Rhs = std::function<void(double, const State&, State&)>;

    struct Options {
        double rtol = 1e-11;
        double atol = 1e-13;
        long max_steps = 10000000;
        double initial_step = 0.0;  // 0 = choose automatically
    };

    // Dense-output segment covering one accepted step [t_left, t_left + h].
    struct Segment {
        double t_left = 0.0;
        double h = 0.0;
        std::array<State, 8> rc;

        State eval(double t) const {
            const double s = (t - t_left) / h, s1 = 1.0 - s;
            return rc[0] +
                   s * (rc[1] +
                        s1 * (rc[2] +
                              s * (rc[3] +
                                   s1 * (rc[4] +
                                         s * (rc[5] +
                                              s1 * (rc[6] + s * rc[7]))))));
        }
    };

    enum class Status { Done, Event, StepUnderflow, MaxSteps };

    struct Result {
        Status status = Status::Done;
        double t = 0.0;
        State y;
        long n_steps = 0, n_accepted = 0, n_rejected = 0;
    };

    // Called after every accepted step; return true to stop integration.
    using StepCallback =
        std::function<bool(const Segment&, double t_new, const State& y_new)>;

    Dop853(Rhs rhs, Options opt = {}) : f_(std::move(rhs)), opt_(opt) {}

    Result integrate(double t0, double t1, State y0,
                     const StepCallback& callback = nullptr,
                     std::vector<Segment>* record = nullptr) const {
        using namespace dop853_detail;
        const double posneg = t1 >= t0 ? 1.0 : -1.0;
        const double hmax = std::abs(t1 - t0);
        const double uround = 2.3e-16;
        const double safe = 0.9, fac1 = 0.333, fac2 = 6.0;
        const double expo1 = 1.0 / 8.0;
        const bool want_dense = callback != nullptr || record != nullptr;

        Result res;
        res.y = y0;
        res.t = t0;
        if (t0 == t1) return res;

        State y = y0, k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, ww, ynew;
        resize_like(y, k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, ww, ynew);
        double t = t0;
        f_(t, y, k1);

        double h = opt_.initial_step != 0.0
                       ? posneg * std::abs(opt_.initial_step)
                       : initial_step_guess(t, y, k1, posneg, hmax);
        bool reject = false, last = false;

        while (true) {
            if (res.n_steps > opt_.max_steps) {
                res.status = Status::MaxSteps;
                res.t = t;
                res.y = y;
                return res;
            }
            if (0.1 * std::abs(h) <= std::abs(t) * uround) {
                res.status = Status::StepUnderflow;
                res.t = t;
                res.y = y;
                return res;
            }
            if ((t + 1.01 * h - t1) * posneg > 0.0) {
                h = t1 - t;
                last = true;
            }
            ++res.n_steps;

            // The twelve stages of the 8(5,3) scheme.
            ww = y + h * a21 * k1;
            f_(t + c2 * h, ww, k2);
            ww = y + h * (a31 * k1 + a32 * k2);
            f_(t + c3 * h, ww, k3);
            ww = y + h * (a41 * k1 + a43 * k3);
            f_(t + c4 * h, ww, k4);
            ww = y + h * (a51 * k1 + a53 * k3 + a54 * k4);
            f_(t + c5 * h, ww, k5);
            ww = y + h * (a61 * k1 + a64 * k4 + a65 * k5);
            f_(t + c6 * h, ww, k6);
            ww = y + h * (a71 * k1 + a74 * k4 + a75 * k5 + a76 * k6);
            f_(t + c7 * h, ww, k7);
            ww = y + h * (a81 * k1 + a84 * k4 + a85 * k5 + a86 * k6 + a87 * k7);
            f_(t + c8 * h, ww, k8);
            ww = y + h * (a91 * k1 + a94 * k4 + a95 * k5 + a96 * k6 +
                          a97 * k7 + a98 * k8);
            f_(t + c9 * h, ww, k9);
            ww = y + h * (a101 * k1 + a104 * k4 + a105 * k5 + a106 * k6 +
                          a107 * k7 + a108 * k8 + a109 * k9);
            f_(t + c10 * h, ww, k10);
            ww = y + h * (a111 * k1 + a114 * k4 + a115 * k5 + a116 * k6 +
                          a117 * k7 + a118 * k8 + a119 * k9 + a1110 * k10);
            State k11;
            resize_like(y, k11);
            f_(t + c11 * h, ww, k11);
            const double tph = t + h;
            ww = y + h * (a121 * k1 + a124 * k4 + a125 * k5 + a126 * k6 +
                          a127 * k7 + a128 * k8 + a129 * k9 + a1210 * k10 +
                          a1211 * k11);
            State k12;
            resize_like(y, k12);
            f_(tph, ww, k12);

            State ksum = b1 * k1 + b6 * k6 + b7 * k7 + b8 * k8 + b9 * k9 +
                         b10 * k10 + b11 * k11 + b12 * k12;
            ynew = y + h * ksum;

            // Combined fifth/third order error estimate.
            double err = 0.0, err2 = 0.0;
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                const double sk =
                    1.0 / (opt_.atol + opt_.rtol * std::max(std::abs(y[i]),
                                                            std::abs(ynew[i])));
                double sqr = ksum[i] - bhh1 * k1[i] - bhh2 * k9[i] -
                             bhh3 * k12[i];
                sqr *= sk;
                err2 += sqr * sqr;
                sqr = er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] +
                      er9 * k9[i] + er10 * k10[i] + er11 * k11[i] +
                      er12 * k12[i];
                sqr *= sk;
                err += sqr * sqr;
            }
            double deno = err + 0.01 * err2;
            if (deno <= 0.0) deno = 1.0;
            err = std::abs(h) * err * std::sqrt(1.0 / (deno * y.size()));

            const double fac11 = std::pow(err, expo1);
            double fac = fac11;
            fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
            double hnew = h / fac;

            if (err <= 1.0) {
                ++res.n_accepted;
                State knew;
                resize_like(y, knew);
                f_(tph, ynew, knew);

                Segment seg;
                if (want_dense) {
                    seg.t_left = t;
                    seg.h = h;
                    seg.rc[0] = y;
                    State ydiff = ynew - y;
                    seg.rc[1] = ydiff;
                    State bspl = h * k1 - ydiff;
                    seg.rc[2] = bspl;
                    seg.rc[3] = ydiff - h * knew - bspl;
                    seg.rc[4] = d41 * k1 + d46 * k6 + d47 * k7 + d48 * k8 +
                                d49 * k9 + d410 * k10 + d411 * k11 +
                                d412 * k12;
                    seg.rc[5] = d51 * k1 + d56 * k6 + d57 * k7 + d58 * k8 +
                                d59 * k9 + d510 * k10 + d511 * k11 +
                                d512 * k12;
                    seg.rc[6] = d61 * k1 + d66 * k6 + d67 * k7 + d68 * k8 +
                                d69 * k9 + d610 * k10 + d611 * k11 +
                                d612 * k12;
                    seg.rc[7] = d71 * k1 + d76 * k6 + d77 * k7 + d78 * k8 +
                                d79 * k9 + d710 * k10 + d711 * k11 +
                                d712 * k12;

                    // Three extra stages for the dense output.
                    State ka, kb, kc;
                    resize_like(y, ka, kb, kc);
                    ww = y + h * (a141 * k1 + a147 * k7 + a148 * k8 +
                                  a149 * k9 + a1410 * k10 + a1411 * k11 +
                                  a1412 * k12 + a1413 * knew);
                    f_(t + c14 * h, ww, ka);
                    ww = y + h * (a151 * k1 + a156 * k6 + a157 * k7 +
                                  a158 * k8 + a1511 * k11 + a1512 * k12 +
                                  a1513 * knew + a1514 * ka);
                    f_(t + c15 * h, ww, kb);
                    ww = y + h * (a161 * k1 + a166 * k6 + a167 * k7 +
                                  a168 * k8 + a169 * k9 + a1613 * knew +
                                  a1614 * ka + a1615 * kb);
                    f_(t + c16 * h, ww, kc);
                    seg.rc[4] = h * (seg.rc[4] + d413 * knew + d414 * ka +
                                     d415 * kb + d416 * kc);
                    seg.rc[5] = h * (seg.rc[5] + d513 * knew + d514 * ka +
                                     d515 * kb + d516 * kc);
                    seg.rc[6] = h * (seg.rc[6] + d613 * knew + d614 * ka +
                                     d615 * kb + d616 * kc);
                    seg.rc[7] = h * (seg.rc[7] + d713 * knew + d714 * ka +
                                     d715 * kb + d716 * kc);
                    if (record) record->push_back(seg);
                }

                k1 = knew;
                y = ynew;
                t = tph;

                if (callback && callback(seg, t, y)) {
                    res.status = Status::Event;
                    res.t = t;
                    res.y = y;
                    return res;
                }
                if (last) {
                    res.status = Status::Done;
                    res.t = t;
                    res.y = y;
                    return res;
                }
                if (std::abs(hnew) > hmax) hnew = posneg * hmax;
                if (reject) hnew = posneg * std::min(std::abs(hnew), std::abs(h));
                reject = false;
            } else {
                hnew = h / std::min(1.0 / fac1, fac11 / safe);
                reject = true;
                if (res.n_accepted >= 1) ++res.n_rejected;
                last = false;
            }
            h = hnew;
        }
    }

private:
    template <typename... Ss>
    static void resize_like(const State& ref, Ss&... ss) {
        if constexpr (N == Eigen::Dynamic) (ss.resize(ref.size()), ...);
        else ((void)ref, (void(ss), ...));
    }

    double initial_step_guess(double t, const State& y, const State& f0,
                              double posneg, double hmax) const {
        double dnf = 0.0, dny = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
            dnf += (f0[i] / sk) * (f0[i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10)
                       ? 1e-6
                       : std::sqrt(dny / dnf) * 0.01;
        h = std::min(h, hmax);
        h *= posneg;

        State y1 = y + h * f0, f1;
        resize_like(y, f1);
        f_(t + h, y1, f1);
        double der2 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sk = opt_.atol + opt_.rtol * std::abs(y[i]);
            const double d = (f1[i] - f0[i]) / sk;
            der2 += d * d;
        }
        der2 = std::sqrt(der2) / std::abs(h);
        const double der12 = std::max(der2, std::sqrt(dnf));
        double h1 = der12 <= 1e-15
                        ? std::max(1e-6, std::abs(h) * 1e-3)
                        : std::pow(0.01 / der12, 1.0 / 8.0);
        return posneg * std::min({100.0 * std::abs(h), h1, hmax});
    }

    Rhs f_;
    Options opt_;
};

// Evaluate a recorded dense output at time t (segments in integration order,
// forward or backward).
template <int N>
typename Dop853<N>::State dense_eval(
    const std::vector<typename Dop853<N>::Segment>& segs, double t) {
    const bool forward = segs.size() < 2 || segs[1].t_left > segs[0].t_left ||
                         segs[0].h > 0;
    std::size_t lo = 0, hi = segs.size();
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        const bool left = forward ? t < segs[mid].t_left
                                  : t > segs[mid].t_left;
        if (left) hi = mid; else lo = mid;
    }
    return segs[lo].eval(t);
}

}  // namespace growthlab
