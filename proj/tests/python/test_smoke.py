import math

import dephlab


def close(a, b, rel=1e-8):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def main():
    model = dephlab.SpectralModel.exp_cutoff(2.0, 1.0, 1.0, 1.0)
    assert close(model.eta1(), 1.0), model.eta1()

    st = dephlab.make_state(model, 0.0)
    lam = dephlab.lambda_of_t(st, 0.7)
    expected = math.gamma(2.0) * (1 + 0.49) ** -1.0 * math.cos(2 * math.atan(0.7))
    assert close(lam, expected, 1e-9), (lam, expected)
    assert dephlab.gamma0(st, 0.0) == 0.0
    assert dephlab.coherence(st, 0.0) == 1.0

    prep = dephlab.QubitPreparation(omega0=1.0, z=0.0, T_prep=1.0)
    assert dephlab.d0(prep) > 0
    tr = dephlab.bath_energy(prep, model, [0.0, 1.0, 10.0])
    assert tr["bath_delta"][0] == 0.0
    assert all(b == -s for b, s in zip(tr["bath_delta"], tr["system_corr_delta"]))

    ex = dephlab.long_time_expansion(prep, model)
    assert ex["terms"], ex

    sub = dephlab.SpectralModel.exp_cutoff(0.5, 1.0, 1.0, 1.0)
    r = dephlab.classify_energy_regime(prep, sub)
    assert r["regime"] == "increase", r

    ohmic = dephlab.SpectralModel.exp_cutoff(1.0, 1.0, 1.0, 1.0)
    nm = dephlab.non_markovianity(dephlab.make_state(ohmic, 0.0), 50.0)
    assert nm["value"] == 0.0 and not nm["intervals"], nm

    s = dephlab.mellin_K(model, complex(0.5, 1.0))
    sn = dephlab.mellin_K_numeric(model, complex(0.5, 1.0))
    assert abs(s - sn) <= 1e-6 * abs(s), (s, sn)

    print("python smoke ok")


if __name__ == "__main__":
    main()
