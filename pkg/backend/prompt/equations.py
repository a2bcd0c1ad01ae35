eq1_text = "公式(1): g(t) = 0.5·dN(t)/N(t) + 1/T_cr(t)，N 为定义年龄人口，1/T_cr 为经济趋势项"
eq2_text = "公式(2): T_cr(t) = T_cr(t0)·sqrt(G_pc(t)/G_pc(t0))，随人均实际GDP增益的平方根增长"
eq3_text = "公式(3): d(ln N(t)) = 2·(g(t) - 1/T_cr(t))，由观测GDP增长率反演定义年龄人口"
eq6_text = "公式(4)-(6): 人均实际GDP年均增量为常数 A，趋势增长率为 A/G_pc(t)"
eq7_text = "公式(7): g_pc(t) = 0.5·dN(t)/N(t) + A/G_pc(t)"
eq8_text = "公式(8): d(ln N(t)) = 2·(g_pc(t) - A/G_pc(t))"
