// CSI-assisted references: BER by quadrature of the bound, capacity through the
// CCDF Laplace transforms, and Laplace transforms of 1 - F1 by direct quadrature.
#include <cstdio>
#include <chrono>
#include "foxlink/csi_assisted.hpp"
#include "foxlink/quadrature.hpp"
using namespace foxlink;
int main(){
  RelaySystem s; s.fso.alpha=5.4; s.fso.beta=4; s.fso.xi=1.1; s.fso.r=1; s.fso.mu1=100;
  s.rf={2.5,1.09,2,100.0}; s.interf={2.5,1.09,1,1.0}; s.scheme.kind=RelayKind::CsiAssisted;
  auto t0=std::chrono::steady_clock::now();
  auto el=[&]{auto t=std::chrono::steady_clock::now(); double d=std::chrono::duration<double>(t-t0).count(); t0=t; return d;};
  for(double x:{0.1,1.0,3.16,30.0}){ auto o=csi::outage_bound(s,x); printf("bound %g %.10g conv %d %.2fs\n",x,o.value,o.converged,el());}
  auto [a,terms]=csi::outage_asymptotic_csi(s,3.16); printf("asym %.6g\n",a.value);
  for(double mu:{1e5,1e6,1e7}){auto q=s; q.fso.mu1=mu; q.rf.meanPower=mu; auto o=csi::outage_bound(q,3.16,false); auto [aa,tt]=csi::outage_asymptotic_csi(q,3.16); printf("mu %g %.6g %.6g\n",mu,o.value,aa.value);}
  auto b1=csi::avg_ber_csi(s,ModulationScheme::bpsk()); printf("ber %.10g %.2fs\n",b1.value,el());
  auto b2=csi::avg_ber_csi_complement(s,ModulationScheme::bpsk()); printf("berc %.10g %.2fs\n",b2.value,el());
  auto f=[&](double v){double x=std::exp(v); return std::sqrt(x/M_PI)*std::exp(-x)/2*csi::outage_bound(s,x,false).value;};
  auto q=quad::integrate(f,-40,6,{1e-9,1e-15,100000,32}); printf("berq %.10g %.2fs\n",q.value,el());
  auto c1=csi::capacity_csi(s); printf("cap %.10g %.2fs\n",c1.value,el());
  auto c2=csi::capacity_via_cmgf(s); printf("cmgf %.10g %.2fs\n",c2.value,el());
  auto k=s; k.rf.kappa=1e4; k.interf.kappa=1e4; printf("capk %.10g nak %.10g %.2fs\n",csi::capacity_csi(k).value,csi::capacity_csi_nakagami(k).value,el());
  for(double ss:{0.1,1.0,10.0}){auto g=[&](double v){double x=std::exp(v);return x*std::exp(-ss*x)*channels::ccdf_fso(s.fso,x);};
    auto l=quad::integrate(g,-40,std::log(60/ss)+3,{1e-10,1e-15,100000,32}); printf("lap %g %.10g %.10g\n",ss,l.value,csi::cmgf_fso(s.fso,ss));}
}
