# Copyright 2026 The trapsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Derived trap constants at 30 digits (mpmath); source of tests/oracles/golden.hpp.

from mpmath import mp, mpf, pi, sqrt, exp, log
mp.dps=30
hbar=mpf('1.054571817e-34'); c=mpf(299792458); kB=mpf('1.380649e-23'); muB=mpf('9.2740100783e-24')
eps0=mpf('8.8541878128e-12'); mu0_4pi=mpf('1.00000000055e-7')
m=mpf('1.443160648e-25'); I=mpf(1.5); g=-2
whpf=2*pi*mpf('6.834682610904290e9'); w1=2*pi*mpf('377.107463380e12'); w2=2*pi*mpf('384.2304844685e12')
G=mpf('38.117e6')
w0=(2*w2+w1)/3
lam=mpf('852e-9'); wL=2*pi*c/lam; D=wL-w0
s=whpf/(w0-wL)
print('w0',w0,'D',D,'ratio FS', abs(D)/(w2-w1))
print('s_diff',s)
wp=2*pi*72e3; wz=2*pi*9.6e3
x0p=sqrt(hbar/(2*m*wp)); x0z=sqrt(hbar/(2*m*wz)); k=2*pi/lam
print('x0p',x0p,'eta_p',k*x0p,'x0z',x0z,'eta_z',k*x0z)
dp=wp*s/2; dz=wz*s/2
print('dperp',dp,'dpar',dz,'dw0',dp+dz/2,'dw0/2pi',(dp+dz/2)/(2*pi))
T=40e-6
nbar=1/(exp(hbar*wz/(kB*T))-1); print('nbar_z',nbar)
G0=4*I*g**2/(3*(2*I+1))*mu0_4pi*whpf**3*muB**2/(hbar*c**3); print('Gamma0',G0)
d2=3*pi*eps0*hbar*c**3*G/w2**3; print('d0',sqrt(d2))
sig=8*pi/3*wL**4/c**4*d2**2/((4*pi*eps0)**2*hbar**2*D**2); print('sigma0',sig)
for UmK in [mpf('0.3'),1,mpf('0.5'),5]:
  U=kB*UmK*1e-3
  flux=2*eps0*c*U*abs(D)/(d2*wL)
  Gnat=G*(wL/w2)**3
  print('U mK',UmK,'flux',flux,'Isig',flux*sig,'oracle',Gnat*U/(hbar*abs(D)))
