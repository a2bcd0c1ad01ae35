from .equations import eq1_text, eq2_text, eq3_text, eq6_text, eq7_text, eq8_text

common_epilog = """配置文件为 KEY=VALUE 格式（COUNTRY_CODE、DEFINING_AGE、TCR_ANCHOR_YEAR、TCR_ANCHOR_VALUE、TREND_A、
CORRECTION_RATIOS、PYRAMID_FILES 以及 *_FILE 数据文件），--set KEY=VALUE 覆盖文件中的同名键。
退出码：0 成功，1 数据/定义域/格式错误，2 用法错误。"""

predict_help = f"""由定义年龄人口序列预测实际GDP增长率。
{eq1_text}
{eq2_text}
人口序列取 --pyramid 指定年份金字塔的队列投影，或配置中的 COHORT_FILE。"""

predict_percap_help = f"""由定义年龄人口序列预测人均实际GDP增长率。
{eq7_text}
{eq6_text}"""

invert_help = f"""由观测实际GDP增长率反演定义年龄人口序列，需要给出初始年与初始人数。
{eq3_text}
{eq2_text}"""

invert_percap_help = f"""由观测人均实际GDP增长率反演定义年龄人口序列。
{eq8_text}"""

fit_n0_help = f"""搜索初始人数 N(t0)，使反演序列在窗口内与金字塔投影的 RMSE 最小（黄金分割搜索，分辨率 1000 人）。
{eq3_text}
给出 --percap 时使用{eq8_text}"""

calibrate_age_help = f"""逐个候选年龄代入公式(1)，按 RMSE 选取定义年龄。
评分区间：--start/--end，其次为配置 CALIBRATION_WINDOW，都未给出时取全部重叠年份。
没有 T_cr 锚点的国家用 --percap，以人均GDP增长率代入公式(7)评分。
{eq1_text}
{eq7_text}"""

fit_trend_help = f"""拟合常数增量 A，默认保持总增长量 (ΣA/G = Σg)，可选普通最小二乘对照。
{eq6_text}"""

mean_increment_help = f"""计算人均实际GDP的年均绝对增量及增量对水平的回归。
{eq6_text}"""

decompose_help = """把人均GDP的总增长拆分为人口分量与经济趋势分量，并按比例拆分年均美元增量。
人口分量 = 0.5·(N_end - N_start)/N_start。"""

project_cohort_help = """把普查年份的年龄金字塔沿时间平移，得到指定年龄的人口年度序列（不考虑死亡与迁移）。"""

compounding_demo_help = """长期平均相对增长率的陷阱：围绕均值交替振荡的增长率复利后总因子低于平滑复利。
闭式解 ((1+r)^2 - a^2)^(n/2) 对比 (1+r)^n。"""

validate_help = """读取配置绑定的全部数据文件并检查格式、单位与美元基期，输出各序列年份范围。"""
