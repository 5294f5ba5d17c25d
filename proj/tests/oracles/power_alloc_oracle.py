"""Allocation coefficients for the fig7 preset system written out from the Gamma-Gamma
leading term of the FSO CDF and the kappa term of the SIR CDF."""
from mpmath import mp, gamma, log10, pi, exp, mpf

mp.dps = 30
a, b, xi2 = mpf(5.4), 4, mpf(1.1) ** 2
B = a * b * xi2 / (xi2 + 1)
expo = mpf(1.09)
AF = exp(expo * mpf(0.5) * 1) * gamma(a - xi2) * gamma(b - xi2) / (gamma(a) * gamma(b)) * B ** xi2
m, k, N, mI, kI, L = mpf(2.5), mpf(1.09), 2, mpf(2.5), mpf(3.5), 3
PL = 20 * log10(4 * pi * 5 / mpf(10.71e-3)) + 10 * mpf(2.55) * log10(mpf(50) / 5)
gain = 10 ** (-PL / 10)
gI = mpf(10) ** mpf(0.2)
zeta2 = (m * k / (mI * kI)) ** k * gamma(N * m - k) * gamma(kI + k) * gamma(L * mI + k)
AR = (gI / gain) ** expo * zeta2 / k / (gamma(N * m) * gamma(k) * gamma(L * mI) * gamma(kI))
print("A_F", AF)
print("A_R", AR)
print("gain", gain)
