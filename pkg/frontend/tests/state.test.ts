import { describe, expect, it } from 'vitest';

import { AppState } from '../src/state.js';
import type { ChartOut, PointAnnotation } from '../src/types.js';
import { INDICATORS } from '../src/types.js';

function annotation(overrides: Partial<PointAnnotation> = {}): PointAnnotation {
    return {
        point_index: 0,
        visit_id: 'v1',
        visit_date: '2026-02-01',
        x: 45.0,
        y: 2.0,
        measures: { weight_kg: 2.0, height_cm: 45.0, muac_cm: 11.0 },
        z: -2.5,
        z_display: '-2.5',
        zone: 'yellow',
        legacy: ['>-3', '<-2'],
        rutf_rations: 2,
        ...overrides,
    };
}

function chart(annotations: PointAnnotation[]): ChartOut {
    return { dataset_id: 'wfl-girls', palette: 'passport', spec: {}, warnings: [], annotations };
}

describe('tab switching', () => {
    it('cycles the three growth indicators without losing the patient', () => {
        const state = new AppState();
        state.setPatients([{ id: 'p1', name: 'Mary', sex: 'female', birth_date: '2025-12-01' }]);
        state.selectPatient('p1');
        expect(state.chartKey()).toMatchObject({ patientId: 'p1', indicator: 'weight-for-age' });
        for (const indicator of INDICATORS) {
            state.setTab(indicator);
            expect(state.activeTab).toBe(indicator);
            expect(state.chartKey()).toMatchObject({ patientId: 'p1', indicator });
        }
    });

    it('rejects tabs outside the configured indicators', () => {
        const state = new AppState();
        expect(() => state.setTab('bmi-for-age' as never)).toThrow(/unknown chart tab/);
    });

    it('notifies subscribers so the chart pane refetches', () => {
        const state = new AppState();
        let notified = 0;
        state.subscribe(() => notified++);
        state.setTab('height-for-age');
        expect(notified).toBe(1);
    });

    it('clears the inspection panel when the tab changes', () => {
        const state = new AppState();
        state.chartLoaded(chart([annotation()]));
        state.inspectPoint(0);
        expect(state.inspected).not.toBeNull();
        state.setTab('weight-for-height');
        expect(state.inspected).toBeNull();
    });
});

describe('palette switching', () => {
    it('changes only the palette in the chart key (data untouched)', () => {
        const state = new AppState();
        state.setPatients([{ id: 'p1', name: 'Mary', sex: 'female', birth_date: '2025-12-01' }]);
        state.selectPatient('p1');
        state.chartLoaded(chart([annotation()]));
        state.setPalette('who');
        expect(state.chartKey()).toMatchObject({ palette: 'who', patientId: 'p1' });
        expect(state.annotations).toHaveLength(1);
    });
});

describe('point inspection', () => {
    it('resolves a tapped point index to its annotation', () => {
        const state = new AppState();
        state.chartLoaded(chart([annotation(), annotation({ point_index: 1, z_display: '-1.0' })]));
        state.inspectPoint(1);
        expect(state.inspected?.zDisplay).toBe('-1.0');
    });

    it('clears on empty-canvas tap', () => {
        const state = new AppState();
        state.chartLoaded(chart([annotation()]));
        state.inspectPoint(0);
        state.inspectPoint(null);
        expect(state.inspected).toBeNull();
    });

    it('ignores indices with no annotation', () => {
        const state = new AppState();
        state.chartLoaded(chart([annotation()]));
        state.inspectPoint(7);
        expect(state.inspected).toBeNull();
    });
});
