// API object shapes, mirroring docs/api.md.

export interface Patient {
    id: string;
    name: string;
    sex: 'female' | 'male';
    birth_date: string;
}

export interface VisitIn {
    id?: string;
    date: string;
    measures: Record<string, number>;
    note?: string | null;
}

export interface Visit extends VisitIn {
    id: string;
    patient_id: string;
}

export interface PointAnnotation {
    point_index: number;
    visit_id: string;
    visit_date: string;
    x: number;
    y: number;
    measures: Record<string, number>;
    z: number | null;
    z_display: string | null;
    zone: string | null;
    legacy: string[] | string | null;
    rutf_rations: number | null;
}

export interface ChartOut {
    dataset_id: string;
    palette: string;
    spec: unknown;
    warnings: string[];
    annotations: PointAnnotation[];
}

export interface Recommendation {
    program: 'OTP' | 'SFP' | 'NONE';
    reasons: string[];
    advisory: string;
    z_wfh: number;
    muac_cm: number;
    oedema: string;
    visit_id: string;
    visit_date: string;
}

export const INDICATORS = ['weight-for-age', 'height-for-age', 'weight-for-height'] as const;
export type Indicator = (typeof INDICATORS)[number];
