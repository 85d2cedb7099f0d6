#include "ltir/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ltir {

namespace {

std::string fmt(const char* format, double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, format, v);
    return buffer;
}

double to_dbm(double watts) { return 10.0 * std::log10(watts * 1e3); }

} // namespace

std::string resolve_report(double t_pulse, double f, double eps_r, double depth) {
    const double vr = vertical_resolution(t_pulse, eps_r);
    const double hr = horizontal_resolution(f, eps_r, depth);
    const double free_space = constants::c * t_pulse;
    std::ostringstream out;
    out << "pulse width: " << fmt("%.6g", t_pulse * 1e12) << " ps, carrier: "
        << fmt("%.6g", f / 1e12) << " THz, eps_r: " << fmt("%.6g", eps_r)
        << ", depth: " << fmt("%.6g", depth * 1e3) << " mm\n";
    out << "vertical resolution V_r = c*T/(2*sqrt(eps_r)) = " << fmt("%.4f", vr * 1e3)
        << " mm\n";
    out << "note: the often-quoted figure c*T = " << fmt("%.4f", free_space * 1e3)
        << " mm is the one-way free-space pulse length; it differs from V_r by the"
           " factor 2*sqrt(eps_r)\n";
    out << "horizontal resolution H_r = " << fmt("%.4f", hr * 1e3) << " mm\n";
    return out.str();
}

std::string budget_report_text(const BudgetLedger& ledger) {
    std::ostringstream out;
    out << "tx power: " << fmt("%.4f", to_dbm(ledger.tx_power_w)) << " dBm ("
        << fmt("%.6g", ledger.tx_power_w * 1e3) << " mW)\n";
    for (const BudgetItem& item : ledger.items) {
        const double signed_db = item.is_gain ? item.value_db : -item.value_db;
        out << "  " << fmt("%+10.4f", signed_db) << " dB  " << item.label << '\n';
    }
    out << "signed sum: " << fmt("%+.4f", ledger.signed_sum_db()) << " dB\n";
    out << "received power: " << fmt("%.4f", to_dbm(ledger.received_power_w)) << " dBm ("
        << fmt("%.6g", ledger.received_power_w * 1e9) << " nW)\n";
    out << "noise power (kTB): " << fmt("%.4f", to_dbm(ledger.noise_power_w)) << " dBm\n";
    out << "SNR: " << fmt("%.2f", ledger.snr_db) << " dB\n";
    const double check = to_dbm(ledger.tx_power_w) + ledger.signed_sum_db() -
                         to_dbm(ledger.received_power_w);
    out << "ledger consistency (tx_dbm + sum - rx_dbm): " << fmt("%.3g", check) << " dB\n";
    return out.str();
}

std::string budget_report_csv(const BudgetLedger& ledger) {
    std::ostringstream out;
    out << "label,value_db,sign\n";
    for (const BudgetItem& item : ledger.items)
        out << item.label << ',' << fmt("%.9g", item.value_db) << ','
            << (item.is_gain ? "gain" : "loss") << '\n';
    out << "tx_power_w," << fmt("%.9g", ledger.tx_power_w) << ",\n";
    out << "received_power_w," << fmt("%.9g", ledger.received_power_w) << ",\n";
    out << "noise_power_w," << fmt("%.9g", ledger.noise_power_w) << ",\n";
    out << "snr_db," << fmt("%.9g", ledger.snr_db) << ",\n";
    return out.str();
}

} // namespace ltir
