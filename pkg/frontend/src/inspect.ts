// Data-point inspection: turn a server annotation into the field panel
// shown above the chart. Exactly four configurable fields, plus the
// decimal z and the RUTF ration count, all taken verbatim from the
// server's annotation (the UI computes nothing clinical).

import type { PointAnnotation } from './types.js';

export const DEFAULT_INSPECT_FIELDS = ['weight_kg', 'height_cm', 'muac_cm', 'rutf'] as const;

const FIELD_LABELS: Record<string, string> = {
    weight_kg: 'Weight (kg)',
    height_cm: 'Height (cm)',
    muac_cm: 'MUAC (cm)',
    oedema: 'Oedema',
    rutf: 'RUTF rations',
};

export const EMPTY_VALUE = '—'; // em dash for "not recorded"

export interface InspectField {
    key: string;
    label: string;
    value: string;
}

export interface InspectModel {
    visitDate: string;
    fields: InspectField[];
    zDisplay: string;
    zone: string | null;
    rutf: string;
}

const OEDEMA_GRADES = ['none', '+', '++', '+++'];

function fieldValue(annotation: PointAnnotation, key: string): string {
    if (key === 'rutf') {
        return annotation.rutf_rations === null ? EMPTY_VALUE : String(annotation.rutf_rations);
    }
    if (key === 'oedema') {
        const code = annotation.measures[key];
        return code === undefined ? EMPTY_VALUE : (OEDEMA_GRADES[code] ?? EMPTY_VALUE);
    }
    const value = annotation.measures[key];
    return value === undefined ? EMPTY_VALUE : String(value);
}

export function inspectModel(
    annotation: PointAnnotation,
    configured: readonly string[] = DEFAULT_INSPECT_FIELDS,
): InspectModel {
    const fields = configured.slice(0, 4).map((key) => ({
        key,
        label: FIELD_LABELS[key] ?? key,
        value: fieldValue(annotation, key),
    }));
    return {
        visitDate: annotation.visit_date,
        fields,
        zDisplay: annotation.z_display ?? EMPTY_VALUE,
        zone: annotation.zone,
        rutf: annotation.rutf_rations === null ? EMPTY_VALUE : String(annotation.rutf_rations),
    };
}
