"""Closed-form latency, cost and velocity-CRB model.

Every function accepts scalars or numpy arrays for ``beta``, ``x`` and ``y``
(broadcast against each other) so the same code path serves single
decisions, GA populations and the brute-force lattice.
"""

from dataclasses import dataclass, fields

import numpy as np

from .scenario import Decision, check_decision


class CrbDomainError(ValueError):
    """CRB undefined: beta >= 1 or zero radar SNR."""


@dataclass(frozen=True)
class Evaluation:
    d_ue: float
    d_tar: float
    h_ue: float
    h_rad: float
    rate: float
    t_local: float
    t_com: float
    t_comp_ue: float
    t_off: float
    t_total: float
    c_com: float
    c_comp: float
    c_total: float
    gamma_rad: float
    crb: float
    objective: float
    feasible: bool

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _unpack(decision):
    if isinstance(decision, Decision):
        return decision.beta, decision.x, decision.y
    beta, x, y = decision
    return beta, x, y


# --- formula kernels (plain parameters, no validation) ---------------------

def ue_distance(scenario, x, y):
    u, v = scenario.ue_position
    return np.sqrt((x - u) ** 2 + (y - v) ** 2 + scenario.uav_altitude ** 2)


def target_distance(scenario, x, y):
    xt, yt = scenario.target_position
    return np.sqrt((x - xt) ** 2 + (y - yt) ** 2 + scenario.uav_altitude ** 2)


def shannon_rate(bandwidth, tx_power, noise_psd, gain):
    return bandwidth * np.log2(1.0 + tx_power * gain / (bandwidth * noise_psd))


def radar_path_loss(d_tar, rcs):
    return 4.0 * np.pi * d_tar ** 2 / rcs


def crb_closed_form(wavelength, beta, task_bits, sample_period, gamma_rad):
    """Velocity CRB in (m/s)^2 for an offloaded sub-sequence of (1-beta)*s bits."""
    return 6.0 * wavelength ** 2 / (
        16.0 * np.pi ** 2 * (1.0 - beta) ** 3 * task_bits ** 3
        * sample_period ** 2 * gamma_rad)


# --- operations on (scenario, decision) ------------------------------------

def channel_gain_ue(scenario, decision):
    _, x, y = _unpack(decision)
    d = ue_distance(scenario, x, y)
    return scenario.ref_channel_gain / d ** scenario.path_loss_exponent


def channel_gain_radar(scenario, decision):
    _, x, y = _unpack(decision)
    d = target_distance(scenario, x, y)
    return scenario.ref_channel_gain / (d ** 2 * radar_path_loss(d, scenario.rcs))


def transmission_rate(scenario, decision):
    h_ue = channel_gain_ue(scenario, decision)
    return shannon_rate(scenario.bandwidth, scenario.tx_power, scenario.noise_psd, h_ue)


def _latency(scenario, beta, rate):
    ws = scenario.cycles_per_bit * scenario.task_bits
    t_local = ws * beta / scenario.uav_capacity
    # the offloaded sub-sequence is sent twice
    t_com = 2.0 * scenario.task_bits * (1.0 - beta) / rate
    t_comp_ue = ws * (1.0 - beta) / scenario.ue_capacity
    t_off = t_com + t_comp_ue
    return t_local, t_com, t_comp_ue, t_off, np.maximum(t_local, t_off)


def latency_chain(scenario, decision):
    """Return ``(t_local, t_com, t_comp_ue, t_off, t_total)`` in seconds."""
    beta, _, _ = _unpack(decision)
    return _latency(scenario, beta, transmission_rate(scenario, decision))


def _cost(scenario, beta, t_com):
    sc = scenario
    offloaded = (1.0 - beta) * sc.task_bits
    c_com = sc.price_bandwidth * 2.0 * offloaded + sc.price_tx_energy * sc.tx_power * t_com
    cycles = sc.cycles_per_bit * offloaded
    c_comp = cycles * sc.price_cycle + sc.price_ue_energy * cycles * sc.energy_per_cycle
    return c_com, c_comp, c_com + c_comp


def cost_chain(scenario, decision):
    """Return ``(c_com, c_comp, c_total)``."""
    beta, _, _ = _unpack(decision)
    t_com = latency_chain(scenario, decision)[1]
    return _cost(scenario, beta, t_com)


def radar_snr(scenario, decision):
    h_rad = channel_gain_radar(scenario, decision)
    return scenario.tx_power * h_rad / (scenario.bandwidth * scenario.noise_psd)


def crb_velocity(scenario, decision):
    beta, _, _ = _unpack(decision)
    gamma = radar_snr(scenario, decision)
    if np.any(np.asarray(beta) >= 1.0) or np.any(np.asarray(gamma) <= 0.0):
        raise CrbDomainError("CRB undefined for beta >= 1 or zero radar SNR")
    return crb_closed_form(scenario.wavelength, beta, scenario.task_bits,
                           scenario.sample_period, gamma)


def evaluate_arrays(scenario, beta, x, y):
    """Vectorised evaluation; returns a dict keyed like :class:`Evaluation`."""
    sc = scenario
    beta, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (beta, x, y)))
    if np.any(beta >= 1.0):
        raise CrbDomainError("CRB undefined for beta >= 1")
    d_ue = ue_distance(sc, x, y)
    d_tar = target_distance(sc, x, y)
    h_ue = sc.ref_channel_gain / d_ue ** sc.path_loss_exponent
    h_rad = sc.ref_channel_gain / (d_tar ** 2 * radar_path_loss(d_tar, sc.rcs))
    rate = shannon_rate(sc.bandwidth, sc.tx_power, sc.noise_psd, h_ue)
    t_local, t_com, t_comp_ue, t_off, t_total = _latency(sc, beta, rate)
    c_com, c_comp, c_total = _cost(sc, beta, t_com)
    gamma = sc.tx_power * h_rad / (sc.bandwidth * sc.noise_psd)
    crb = crb_closed_form(sc.wavelength, beta, sc.task_bits, sc.sample_period, gamma)
    objective = sc.weight_latency * t_total + sc.weight_crb * crb
    return {
        "d_ue": d_ue, "d_tar": d_tar, "h_ue": h_ue, "h_rad": h_rad, "rate": rate,
        "t_local": t_local, "t_com": t_com, "t_comp_ue": t_comp_ue,
        "t_off": t_off, "t_total": t_total,
        "c_com": c_com, "c_comp": c_comp, "c_total": c_total,
        "gamma_rad": gamma, "crb": crb, "objective": objective,
        "feasible": c_total <= sc.budget,
    }


def evaluate(scenario, decision):
    """Full metric breakdown for one decision."""
    decision = check_decision(scenario, decision)
    beta, x, y = decision.as_tuple()
    gamma = radar_snr(scenario, decision)
    if gamma <= 0.0:
        raise CrbDomainError("zero radar SNR")
    values = evaluate_arrays(scenario, beta, x, y)
    out = {k: float(v) for k, v in values.items() if k != "feasible"}
    return Evaluation(feasible=bool(values["feasible"]), **out)


def penalty(scenario, c_total, penalty_mu):
    violation = np.maximum(0.0, c_total - scenario.budget) / scenario.budget
    return penalty_mu * violation


def penalized_objective(scenario, decision, penalty_mu):
    """Objective plus ``penalty_mu`` times the relative budget violation."""
    if penalty_mu < 0:
        raise ValueError("penalty_mu must be nonnegative")
    beta, x, y = _unpack(decision)
    values = evaluate_arrays(scenario, beta, x, y)
    out = values["objective"] + penalty(scenario, values["c_total"], penalty_mu)
    return float(out) if np.ndim(out) == 0 else out


def penalized_arrays(scenario, genes, penalty_mu):
    """Penalised objective and feasibility for an ``(n, 3)`` gene matrix."""
    genes = np.asarray(genes, dtype=float)
    values = evaluate_arrays(scenario, genes[:, 0], genes[:, 1], genes[:, 2])
    z = values["objective"] + penalty(scenario, values["c_total"], penalty_mu)
    return z, values["feasible"]
