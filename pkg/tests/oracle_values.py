"""Reference values frozen from ``tests/oracles/make_oracles.py`` (mpmath, 30 digits).

The Rician entries describe alpha = 2, eta = 1, kappa = 1, mu = 1, p = q = 1,
where the received power is noncentral chi-square with 2 degrees of freedom
and noncentrality 2, evaluated at gamma_bar = 10 (10 dB), A = 0.75 or 1,
u = 2 and the P_f = 0.1 threshold.  They are untruncated values.
"""

LOG_GAMMA_1P1I = complex(-0.6509231993018564, -0.3016403204675332)
THRESHOLD_U2_PF01 = 7.779440339734858
MARCUM_Q2_1_2 = 0.5301469080839657
# H^{2,1}_{1,2}[x | (0, 1); (0, 1), (-0.25, 1)]  (alpha = 2, phi = 1, A = 0.75)
ER_H_X05_A075 = 1.3372618494303232
ER_H_X2_A075 = 0.477189789065841
# E[1 - Q_2(sqrt(2 gamma), sqrt(lambda))], gamma exponential with mean 2
ADP_KERNEL0_U2_G1 = 0.6000246514864996
AUC_AWGN_U2_G5 = 0.9333059386180822
RICIAN_ER_10DB_A075 = 4.102826129297394
RICIAN_ER_10DB_A1 = 3.8499776585236973
RICIAN_MISSED_10DB = 0.053181541109672624
RICIAN_CAUC_10DB = 0.022853658358714907
